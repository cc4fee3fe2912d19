use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use lamcore::lamination::WeightedMulticurve;
use lamcore::mcg::MappingClass;
use lamcore::rational::{one, parse_q};
use lamcore::surface::{surface, validate_normal, NormalMulticurve};
use serde_json::Value;

/// Where named curves come from: an override directory of `<name>.json` files, then the built-in chain.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub genus: usize,
    pub dir: Option<PathBuf>,
}

impl Fixtures {
    pub fn curve(&self, name: &str) -> Result<NormalMulticurve> {
        if let Some(dir) = &self.dir {
            let path = dir.join(format!("{name}.json"));
            if path.exists() {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let c: NormalMulticurve = serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                if c.genus() != self.genus {
                    bail!(
                        "fixture {name} has genus {}, expected {}",
                        c.genus(),
                        self.genus
                    );
                }
                return Ok(c);
            }
        }
        surface(self.genus)?
            .fixture(name)
            .ok_or_else(|| anyhow!("unknown curve {name}"))
    }

    pub fn word(&self, s: &str) -> Result<MappingClass> {
        Ok(MappingClass::parse_with(self.genus, s, |n| {
            self.curve(n).ok()
        })?)
    }

    fn coords(&self, s: &str) -> Result<NormalMulticurve> {
        let v: Vec<u64> =
            serde_json::from_str(s).with_context(|| format!("bad coordinates {s}"))?;
        Ok(validate_normal(&*surface(self.genus)?, &v)?)
    }

    fn named_or_coords(&self, s: &str) -> Result<NormalMulticurve> {
        if s.starts_with('[') {
            self.coords(s)
        } else {
            self.curve(s)
        }
    }

    /// `2*c1 + 1/2*c3`, `[1,0,…]`, or `0`.
    pub fn expression(&self, s: &str) -> Result<WeightedMulticurve> {
        let s = s.trim();
        let mut x = WeightedMulticurve::zero(self.genus);
        if s == "0" {
            return Ok(x);
        }
        for term in split_terms(s) {
            let term = term.trim();
            let (w, name) = match term.split_once('*') {
                Some((w, n)) => (parse_q(w.trim())?, n.trim()),
                None => (one(), term),
            };
            let m = self.named_or_coords(name)?;
            x = x.plus(&WeightedMulticurve::from_normal(&m, w)?)?;
        }
        Ok(x)
    }
}

/// Splits on `+` outside brackets.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Text of an argument: `-` is stdin, an existing path is read, anything else is taken literally.
pub fn read_source(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        return Ok(s);
    }
    let p = Path::new(src);
    if p.is_file() {
        return std::fs::read_to_string(p).with_context(|| format!("reading {src}"));
    }
    Ok(src.to_string())
}

pub fn lamination_value(fx: &Fixtures, v: &Value) -> Result<WeightedMulticurve> {
    match v {
        Value::String(s) => fx.expression(s),
        Value::Object(o) if o.contains_key("components") => Ok(serde_json::from_value(v.clone())?),
        Value::Object(_) => {
            let m: NormalMulticurve = serde_json::from_value(v.clone())?;
            Ok(WeightedMulticurve::from_normal(&m, one())?)
        }
        _ => bail!("expected a lamination document or expression"),
    }
}

/// A lamination from a file, stdin, inline JSON or an expression.
pub fn lamination(fx: &Fixtures, src: &str) -> Result<WeightedMulticurve> {
    let text = read_source(src)?;
    let t = text.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).context("parsing lamination JSON")?;
        lamination_value(fx, &v)
    } else {
        fx.expression(t)
    }
}

/// A single curve: a name, inline coordinates, or a multicurve document.
pub fn curve(fx: &Fixtures, src: &str) -> Result<NormalMulticurve> {
    let text = read_source(src)?;
    let t = text.trim();
    if t.starts_with('{') {
        Ok(serde_json::from_str(t).context("parsing multicurve JSON")?)
    } else {
        fx.named_or_coords(t)
    }
}

/// Comma-separated rationals.
pub fn rationals(s: &str) -> Result<Vec<lamcore::rational::Q>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| Ok(parse_q(p.trim())?))
        .collect()
}
