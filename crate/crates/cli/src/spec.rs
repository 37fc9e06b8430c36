//! Parsers for the compact spec strings taken on the command line:
//! `--gen gnp:n=64,p=0.1` / `--gen rmat:scale=17,ef=8,probs=0.45,0.15,0.15,0.25`,
//! `--b const:K` / `--b uniform:LO,HI`, and `--weights LO,HI`.

use anyhow::{anyhow, bail, Context, Result};
use bmatch::{BMode, RmatProbs};

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Gnp { n: usize, p: f64 },
    Rmat { scale: u32, ef: usize, probs: RmatProbs },
}

/// Split `key=a,key2=b,c,d` into `(key, value)` pairs. A comma-separated
/// token without `=` continues the previous value, so list-valued keys
/// (`probs=0.25,0.25,0.25,0.25`) survive the split.
fn key_values(body: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for token in body.split(',') {
        match token.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_string(), v.trim().to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(token.trim());
                }
                None => bail!("`{token}` is not a key=value pair"),
            },
        }
    }
    Ok(out)
}

fn take<'a>(pairs: &'a [(String, String)], key: &str, spec: &str) -> Result<&'a str> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| anyhow!("`{spec}` is missing `{key}=`"))
}

pub fn parse_gen_spec(spec: &str) -> Result<GenSpec> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("`{spec}`: expected `gnp:...` or `rmat:...`"))?;
    let pairs = key_values(body).with_context(|| format!("in generator spec `{spec}`"))?;
    for (k, _) in &pairs {
        let known: &[&str] = match kind {
            "gnp" => &["n", "p"],
            _ => &["scale", "ef", "probs"],
        };
        if !known.contains(&k.as_str()) {
            bail!("`{spec}`: unknown key `{k}`");
        }
    }
    match kind {
        "gnp" => {
            let n = take(&pairs, "n", spec)?.parse().context("n")?;
            let p = take(&pairs, "p", spec)?.parse().context("p")?;
            Ok(GenSpec::Gnp { n, p })
        }
        "rmat" => {
            let scale = take(&pairs, "scale", spec)?.parse().context("scale")?;
            let ef = take(&pairs, "ef", spec)?.parse().context("ef")?;
            let probs = match pairs.iter().find(|(k, _)| k == "probs") {
                None => RmatProbs::er(),
                Some((_, v)) => {
                    let parts: Vec<f64> = v
                        .split(',')
                        .map(|t| t.trim().parse().with_context(|| format!("prob `{t}`")))
                        .collect::<Result<_>>()?;
                    let [a, b, c, d] = parts.as_slice() else {
                        bail!("`{spec}`: probs needs exactly four values");
                    };
                    RmatProbs::new(*a, *b, *c, *d)?
                }
            };
            Ok(GenSpec::Rmat { scale, ef, probs })
        }
        other => bail!("unknown generator `{other}` (expected `gnp` or `rmat`)"),
    }
}

pub fn parse_b_spec(spec: &str) -> Result<BMode> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("`{spec}`: expected `const:K` or `uniform:LO,HI`"))?;
    match kind {
        "const" => Ok(BMode::Constant(body.parse().with_context(|| format!("in `{spec}`"))?)),
        "uniform" => {
            let (lo, hi) = body
                .split_once(',')
                .ok_or_else(|| anyhow!("`{spec}`: uniform needs `LO,HI`"))?;
            Ok(BMode::Uniform(
                lo.trim().parse().with_context(|| format!("in `{spec}`"))?,
                hi.trim().parse().with_context(|| format!("in `{spec}`"))?,
            ))
        }
        other => bail!("unknown b spec `{other}` (expected `const` or `uniform`)"),
    }
}

pub fn parse_weight_range(spec: &str) -> Result<(f64, f64)> {
    let (lo, hi) = spec
        .split_once(',')
        .ok_or_else(|| anyhow!("`{spec}`: expected `LO,HI`"))?;
    let lo: f64 = lo.trim().parse().with_context(|| format!("in `{spec}`"))?;
    let hi: f64 = hi.trim().parse().with_context(|| format!("in `{spec}`"))?;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        bail!("weight range ({lo}, {hi}] must satisfy 0 <= LO < HI < inf");
    }
    Ok((lo, hi))
}
