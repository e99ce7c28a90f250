//! Named function generators shared by the CLI, the sweep driver, and the
//! verification suites.
//!
//! Grammar: `const:<c>`, `char:<xi>`, `poly:<terms>`, `gallery:<name>[:n]`,
//! `random:<seed>`, `file:<path.json>`.

use crate::error::{Error, Result};
use crate::group::{Character, GroupSpec};
use crate::polycalc::PolynomialPhase;
use crate::rational::UnitRational;
use crate::rng::SplitMix64;
use crate::table::{Complex, ComplexTable, ExactTable, TableJson};

/// A generated function: exact tables convert to phases explicitly where a
/// complex function is required.
#[derive(Clone, Debug)]
pub enum Generated {
    Exact(ExactTable),
    Complex(ComplexTable),
}

impl Generated {
    /// The complex view: exact tables become their phase e(f).
    pub fn into_complex(self) -> ComplexTable {
        match self {
            Generated::Exact(t) => t.to_phase(),
            Generated::Complex(t) => t,
        }
    }

    pub fn into_exact(self) -> Result<ExactTable> {
        match self {
            Generated::Exact(t) => Ok(t),
            Generated::Complex(_) => Err(Error::Precondition(
                "this operation needs an exact table, got a complex one".into(),
            )),
        }
    }
}

/// Deterministic 1-bounded random table: radius sqrt(u) and uniform angle
/// per point, so values fill the unit disc.
pub fn random_table(spec: &GroupSpec, seed: u64) -> ComplexTable {
    let mut rng = SplitMix64::new(seed);
    ComplexTable::from_fn(spec, |_| {
        let r = rng.next_f64().sqrt();
        let theta = 2.0 * std::f64::consts::PI * rng.next_f64();
        Complex::new(r * theta.cos(), r * theta.sin())
    })
}

/// Builds the function named by `expr` on the given group.
pub fn generate(spec: &GroupSpec, expr: &str) -> Result<Generated> {
    let (kind, arg) = expr
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bad generator {expr:?}: expected kind:arg")))?;
    match kind {
        "const" => {
            let c: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant {arg:?}")))?;
            Ok(Generated::Complex(ComplexTable::constant(
                spec,
                Complex::new(c, 0.0),
            )))
        }
        "char" => {
            let coords: Vec<i64> = arg
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad character coordinate {c:?}")))
                })
                .collect::<Result<_>>()?;
            let xi = Character(spec.element(&coords)?);
            Ok(Generated::Exact(ExactTable::from_fn(spec, |x| {
                spec.character_pairing(&xi, x).unwrap()
            })))
        }
        "poly" => {
            let phase = PolynomialPhase::parse(spec, arg)?;
            Ok(Generated::Exact(phase.to_table()))
        }
        "gallery" => {
            let (name, n) = match arg.split_once(':') {
                Some((name, n)) => {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad gallery size {n:?}")))?;
                    (name, Some(n))
                }
                None => (arg, None),
            };
            gallery_function(spec, name, n)
        }
        "random" => {
            let seed: u64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed {arg:?}")))?;
            Ok(Generated::Complex(random_table(spec, seed)))
        }
        "file" => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::Precondition(format!("cannot read {arg}: {e}")))?;
            let json: TableJson = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad table JSON in {arg}: {e}")))?;
            if json.spec != *spec {
                return Err(Error::Precondition(format!(
                    "table in {arg} lives on {} but the requested group is {spec}",
                    json.spec
                )));
            }
            match json.values {
                crate::table::TableValues::Exact(_) => Ok(Generated::Exact(json.into_exact()?)),
                crate::table::TableValues::Complex(_) => {
                    Ok(Generated::Complex(json.into_complex()?))
                }
            }
        }
        _ => Err(Error::Parse(format!(
            "unknown generator kind {kind:?}; known: const, char, poly, gallery, random, file"
        ))),
    }
}

fn gallery_function(spec: &GroupSpec, name: &str, n: Option<usize>) -> Result<Generated> {
    if let Some(n) = n {
        let expected = GroupSpec::new(vec![2; n])?;
        if *spec != expected && name == "appendixD" {
            return Err(Error::Precondition(format!(
                "gallery:appendixD:{n} lives on {expected}, requested group is {spec}"
            )));
        }
    }
    match name {
        // The octave-phase sum: f(x) = sum |x_i| / 8 on a 2-torsion group.
        "appendixD" | "appendix-d" => {
            if spec.moduli().iter().any(|&d| d != 2) {
                return Err(Error::Precondition(format!(
                    "gallery:appendixD needs a group of the form 2^n, got {spec}"
                )));
            }
            Ok(Generated::Exact(ExactTable::from_fn(spec, |x| {
                UnitRational::new(x.coords().iter().sum::<u64>(), 8)
            })))
        }
        // Dirac mass at the origin.
        "indicator" => Ok(Generated::Complex(ComplexTable::from_fn(spec, |x| {
            if x.coords().iter().all(|&c| c == 0) {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        }))),
        _ => Err(Error::Precondition(format!(
            "unknown gallery function {name:?}; known: appendixD, indicator"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    #[test]
    fn basic_generators() {
        let g = spec("2,4");
        assert!(matches!(
            generate(&g, "const:1").unwrap(),
            Generated::Complex(_)
        ));
        let ch = generate(&g, "char:1,2").unwrap().into_exact().unwrap();
        assert_eq!(*ch.value(&g.element(&[1, 1]).unwrap()), UnitRational::zero());
        let p = generate(&g, "poly:1/2 * x1^(1)").unwrap().into_exact().unwrap();
        assert_eq!(*p.value(&g.element(&[1, 0]).unwrap()), UnitRational::new(1, 2));

        let r1 = generate(&g, "random:7").unwrap().into_complex();
        let r2 = generate(&g, "random:7").unwrap().into_complex();
        assert_eq!(r1, r2);
        assert!(r1.sup_norm() <= 1.0 + 1e-12);

        assert!(generate(&g, "nope:1").is_err());
        assert!(generate(&g, "const:x").is_err());
    }

    #[test]
    fn gallery_generators() {
        let g = spec("2,2");
        let f = generate(&g, "gallery:appendixD").unwrap().into_exact().unwrap();
        assert_eq!(*f.value(&g.element(&[1, 1]).unwrap()), UnitRational::new(2, 8));
        assert!(generate(&spec("3"), "gallery:appendixD").is_err());
        assert!(generate(&g, "gallery:appendixD:3").is_err());

        let ind = generate(&spec("2"), "gallery:indicator").unwrap().into_complex();
        assert_eq!(ind.value_at_index(0).re, 1.0);
        assert_eq!(ind.value_at_index(1).re, 0.0);
    }

    #[test]
    fn file_roundtrip() {
        let g = spec("2");
        let t = ExactTable::from_values(
            g.clone(),
            vec![UnitRational::zero(), UnitRational::new(1, 4)],
        )
        .unwrap();
        let path = std::env::temp_dir().join("gowers_lab_gen_test.json");
        std::fs::write(
            &path,
            serde_json::to_string(&TableJson::from_exact(&t)).unwrap(),
        )
        .unwrap();
        let expr = format!("file:{}", path.display());
        let back = generate(&g, &expr).unwrap().into_exact().unwrap();
        assert_eq!(back, t);
        assert!(generate(&spec("3"), &expr).is_err());
        std::fs::remove_file(&path).ok();
    }
}
