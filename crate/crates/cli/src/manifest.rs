//! Manifold manifests.
//!
//! ```json
//! {
//!   "lattice": { "tau": [0.0, 1.0] },
//!   "arg_choice": 0.0,
//!   "ring": {
//!     "generators": [{ "name": "p1", "degree": 4 }, { "name": "p2", "degree": 8 }],
//!     "top_degree": 8,
//!     "integral_table": { "p1^2": "0", "p2": "1" }
//!   },
//!   "tangent": { "pontryagin": ["0", "p2"] },
//!   "options": { "radius": 60.0, "tolerance": 1e-8 }
//! }
//! ```
//!
//! The lattice is either `{"tau": z}` (with `ω₁ = 1`) or `{"omega1": z, "omega2": w}`;
//! complex numbers are `[re, im]` and rationals are `"p/q"` strings or integers.
//! `tangent.dimension` defaults to the top degree. Every validation error carries
//! the line and column of the offending entry.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use wittenloc::cohom_ring::{
    parse_class, parse_rational, CohomClass, ManifoldSpec, Monomial, RingSpec, TangentData,
};
use wittenloc::lattice_fn::{regularization_basis, ArgumentChoice, Lattice};

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "manifest line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ManifestError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatticeInput {
    Tau(Complex64),
    Basis(Complex64, Complex64),
}

impl LatticeInput {
    pub fn lattice(&self) -> wittenloc::Result<Lattice> {
        match *self {
            LatticeInput::Tau(tau) => Lattice::from_tau(tau),
            LatticeInput::Basis(w1, w2) => Lattice::new(w1, w2),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ManifestOptions {
    pub radius: Option<f64>,
    pub tolerance: Option<f64>,
}

/// A validated manifest.
#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub lattice: LatticeInput,
    pub arg_base: Option<f64>,
    pub ring: Arc<RingSpec>,
    pub tangent: TangentData,
    pub options: ManifestOptions,
}

#[derive(Debug, Clone, PartialEq)]
struct Rational(BigRational);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a \"p/q\" string or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rational, E> {
                parse_rational(s).map(Rational).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(n.into())))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(n.into())))
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> Result<Rational, E> {
                Err(E::custom(format!(
                    "{x} is not an integer; write rationals as \"p/q\" strings"
                )))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    tau: Option<[f64; 2]>,
    omega1: Option<[f64; 2]>,
    omega2: Option<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    generators: Vec<RawGenerator>,
    top_degree: u32,
    integral_table: BTreeMap<String, Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTangent {
    dimension: Option<u32>,
    #[serde(default)]
    pontryagin: Vec<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    radius: Option<f64>,
    tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    lattice: RawLattice,
    arg_choice: Option<f64>,
    ring: RawRing,
    tangent: RawTangent,
    #[serde(default)]
    options: RawOptions,
}

/// Positions in the source text, for error reporting after parsing succeeded.
struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    /// Offset of the object key `"key"`, searching from `from`.
    fn key(&self, key: &str, from: usize) -> Option<usize> {
        let quoted = serde_json::to_string(key).ok()?;
        let mut start = from;
        while let Some(i) = self.text[start..].find(&quoted) {
            let at = start + i;
            let rest = self.text[at + quoted.len()..].trim_start();
            if rest.starts_with(':') {
                return Some(at);
            }
            start = at + quoted.len();
        }
        None
    }

    /// Offset of the `nth` string literal `lit` after the key path `keys`.
    fn literal(&self, keys: &[&str], lit: &str, nth: usize) -> Option<usize> {
        let from = self.path(keys)?;
        let quoted = serde_json::to_string(lit).ok()?;
        let mut start = from;
        for k in 0..=nth {
            let i = self.text[start..].find(&quoted)?;
            if k == nth {
                return Some(start + i);
            }
            start += i + quoted.len();
        }
        None
    }

    fn path(&self, keys: &[&str]) -> Option<usize> {
        let mut at = 0;
        for k in keys {
            at = self.key(k, at)?;
        }
        Some(at)
    }

    fn error_at(&self, offset: Option<usize>, message: impl Into<String>) -> ManifestError {
        let (line, column) = self.position(offset.unwrap_or(0));
        ManifestError {
            line,
            column,
            message: message.into(),
        }
    }

    fn at_path(&self, keys: &[&str], message: impl Into<String>) -> ManifestError {
        // fall back to the longest prefix that exists
        let offset = (1..=keys.len()).rev().find_map(|n| self.path(&keys[..n]));
        self.error_at(offset, message)
    }
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `a^2*b` into exponents; `"1"` is the empty monomial.
fn parse_monomial(names: &[(String, u32)], text: &str) -> Result<Monomial, String> {
    let mut mono = vec![0u32; names.len()];
    let t = text.trim();
    if t == "1" {
        return Ok(mono);
    }
    for factor in t.split('*') {
        let factor = factor.trim();
        let (name, power) = match factor.split_once('^') {
            Some((n, p)) => (
                n.trim(),
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("invalid exponent in monomial {text:?}"))?,
            ),
            None => (factor, 1),
        };
        let idx = names
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| format!("unknown generator {name:?} in monomial {text:?}"))?;
        mono[idx] += power;
    }
    Ok(mono)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let raw: RawManifest = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => full,
        };
        ManifestError {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let loc = Locator { text };

    let lattice = match (raw.lattice.tau, raw.lattice.omega1, raw.lattice.omega2) {
        (Some(t), None, None) => LatticeInput::Tau(complex(t)),
        (None, Some(a), Some(b)) => LatticeInput::Basis(complex(a), complex(b)),
        _ => {
            return Err(loc.at_path(
                &["lattice"],
                "lattice needs either \"tau\" or both \"omega1\" and \"omega2\"",
            ))
        }
    };
    let lat = lattice
        .lattice()
        .map_err(|e| loc.at_path(&["lattice"], e.to_string()))?;
    if let Some(base) = raw.arg_choice {
        let arg =
            ArgumentChoice::new(base).map_err(|e| loc.at_path(&["arg_choice"], e.to_string()))?;
        regularization_basis(&lat, &arg)
            .map_err(|e| loc.at_path(&["arg_choice"], e.to_string()))?;
    }

    let names: Vec<(String, u32)> = raw
        .ring
        .generators
        .iter()
        .map(|g| (g.name.clone(), g.degree))
        .collect();
    let unit_table =
        |n: usize| BTreeMap::from([(vec![0u32; n], BigRational::from_integer(1.into()))]);
    for i in 0..names.len() {
        if let Err(e) = RingSpec::new(names[..=i].to_vec(), 0, unit_table(i + 1)) {
            let at = loc.literal(&["ring", "generators"], &names[i].0, 0);
            return Err(loc.error_at(
                at.or_else(|| loc.path(&["ring", "generators"])),
                e.to_string(),
            ));
        }
    }
    if !raw.ring.top_degree.is_multiple_of(2) {
        return Err(loc.at_path(
            &["ring", "top_degree"],
            format!("top degree {} is odd", raw.ring.top_degree),
        ));
    }
    let mut table = BTreeMap::new();
    for (key, value) in &raw.ring.integral_table {
        let at = || loc.key(key, loc.path(&["ring", "integral_table"]).unwrap_or(0));
        let mono = parse_monomial(&names, key).map_err(|m| loc.error_at(at(), m))?;
        let degree: u32 = mono.iter().zip(&names).map(|(e, (_, d))| e * d).sum();
        if degree != raw.ring.top_degree {
            return Err(loc.error_at(
                at(),
                format!(
                    "integral table entry {key:?} has degree {degree}, expected {}",
                    raw.ring.top_degree
                ),
            ));
        }
        if table.insert(mono, value.0.clone()).is_some() {
            return Err(loc.error_at(
                at(),
                format!("integral table entry {key:?} repeats a monomial"),
            ));
        }
    }
    let ring = RingSpec::new(names, raw.ring.top_degree, table)
        .map_err(|e| loc.at_path(&["ring", "integral_table"], e.to_string()))?;

    let mut pontryagin = Vec::new();
    for (k, entry) in raw.tangent.pontryagin.iter().enumerate() {
        let nth = raw.tangent.pontryagin[..k]
            .iter()
            .filter(|e| *e == entry)
            .count();
        let at = loc.literal(&["tangent", "pontryagin"], entry, nth);
        let class: CohomClass<BigRational> =
            parse_class(&ring, entry).map_err(|e| loc.error_at(at, format!("p{}: {e}", k + 1)))?;
        if !class.is_homogeneous(4 * (k as u32 + 1)) {
            return Err(loc.error_at(
                at,
                format!(
                    "p{} = {entry:?} is not homogeneous of degree {}",
                    k + 1,
                    4 * (k + 1)
                ),
            ));
        }
        pontryagin.push(class);
    }
    let dimension = raw.tangent.dimension.unwrap_or(ring.top_degree());
    let tangent = TangentData::new(&ring, pontryagin, dimension)
        .map_err(|e| loc.at_path(&["tangent", "pontryagin"], e.to_string()))?;
    ManifoldSpec::new(tangent.clone()).map_err(|e| {
        let keys: &[&str] = if raw.tangent.dimension.is_some() {
            &["tangent", "dimension"]
        } else {
            &["tangent"]
        };
        loc.at_path(keys, e.to_string())
    })?;

    for (key, v) in [
        ("radius", raw.options.radius),
        ("tolerance", raw.options.tolerance),
    ] {
        if let Some(x) = v {
            if !(x.is_finite() && x > 0.0) {
                return Err(loc.at_path(
                    &["options", key],
                    format!("{key} must be positive, got {x}"),
                ));
            }
        }
    }

    Ok(Manifest {
        lattice,
        arg_base: raw.arg_choice,
        ring,
        tangent,
        options: ManifestOptions {
            radius: raw.options.radius,
            tolerance: raw.options.tolerance,
        },
    })
}

impl Manifest {
    pub fn manifold(&self) -> ManifoldSpec {
        ManifoldSpec::new(self.tangent.clone()).expect("validated at load")
    }

    /// Canonical JSON form; parsing it gives back an equal manifest.
    pub fn to_json(&self) -> Value {
        let pair = |z: Complex64| json!([z.re, z.im]);
        let lattice = match self.lattice {
            LatticeInput::Tau(t) => json!({ "tau": pair(t) }),
            LatticeInput::Basis(a, b) => json!({ "omega1": pair(a), "omega2": pair(b) }),
        };
        let generators: Vec<Value> = self
            .ring
            .generators()
            .iter()
            .map(|g| json!({ "name": g.name, "degree": g.degree }))
            .collect();
        let table: Map<String, Value> = self
            .ring
            .integral_table()
            .iter()
            .map(|(m, q)| (self.ring.render_monomial(m), json!(q.to_string())))
            .collect();
        let pontryagin: Vec<Value> = self
            .tangent
            .pontryagin_classes()
            .iter()
            .map(|p| json!(p.render()))
            .collect();
        let mut out = Map::new();
        out.insert("lattice".into(), lattice);
        if let Some(b) = self.arg_base {
            out.insert("arg_choice".into(), json!(b));
        }
        out.insert(
            "ring".into(),
            json!({
                "generators": generators,
                "top_degree": self.ring.top_degree(),
                "integral_table": table,
            }),
        );
        out.insert(
            "tangent".into(),
            json!({ "dimension": self.tangent.dimension(), "pontryagin": pontryagin }),
        );
        let mut options = Map::new();
        if let Some(r) = self.options.radius {
            options.insert("radius".into(), json!(r));
        }
        if let Some(t) = self.options.tolerance {
            options.insert("tolerance".into(), json!(t));
        }
        out.insert("options".into(), Value::Object(options));
        Value::Object(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STRING8: &str = r#"{
  "lattice": { "tau": [0.1, 1.2] },
  "ring": {
    "generators": [{ "name": "p1", "degree": 4 }, { "name": "p2", "degree": 8 }],
    "top_degree": 8,
    "integral_table": { "p1^2": "0", "p2": 1 }
  },
  "tangent": { "pontryagin": ["0", "p2"] }
}"#;

    #[test]
    fn loads_and_round_trips() {
        let m = parse_manifest(STRING8).unwrap();
        assert!(m.manifold().string_flag());
        assert_eq!(m.tangent.dimension(), 8);
        let again = parse_manifest(&serde_json::to_string_pretty(&m.to_json()).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    fn error_of(text: &str) -> ManifestError {
        parse_manifest(text).unwrap_err()
    }

    #[test]
    fn errors_point_at_the_entry() {
        let e = error_of(&STRING8.replace("\"p2\": 1", "\"p2\": 1.5"));
        assert_eq!(e.line, 6, "{e}");
        let e = error_of(&STRING8.replace("\"p1^2\": \"0\"", "\"p1^3\": \"0\""));
        assert_eq!((e.line, e.column), (6, 25), "{e}");
        assert!(e.message.contains("degree 12"));
        let e = error_of(&STRING8.replace("[\"0\", \"p2\"]", "[\"0\", \"p3\"]"));
        assert_eq!(e.line, 8, "{e}");
        assert!(e.message.contains("p2:"), "{e}");
        let e = error_of(&STRING8.replace("\"degree\": 8", "\"degree\": 7"));
        assert_eq!(e.line, 4, "{e}");
        let e = error_of(&STRING8.replace("[0.1, 1.2]", "[0.1, -1.2]"));
        assert_eq!(e.line, 2, "{e}");
        let e = error_of(&STRING8.replace("\"p1^2\": \"0\", ", ""));
        assert!(e.message.contains("missing"), "{e}");
        assert_eq!(e.line, 6);
        let e = error_of(&STRING8.replace("\"tangent\"", "\"tangnet\""));
        assert!(e.message.contains("unknown field"), "{e}");
        assert_eq!(e.line, 8);
        let e = error_of(&STRING8.replace("[\"0\", \"p2\"]", "[\"p2\"]"));
        assert_eq!(e.line, 8, "{e}");
    }

    #[test]
    fn monomials() {
        let names = vec![("a".to_string(), 2), ("b".to_string(), 4)];
        assert_eq!(parse_monomial(&names, "a^2*b").unwrap(), vec![2, 1]);
        assert_eq!(parse_monomial(&names, "1").unwrap(), vec![0, 0]);
        assert_eq!(parse_monomial(&names, "b * a").unwrap(), vec![1, 1]);
        assert!(parse_monomial(&names, "c").is_err());
        assert!(parse_monomial(&names, "a^x").is_err());
    }
}
