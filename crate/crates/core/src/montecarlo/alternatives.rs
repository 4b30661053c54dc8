//! Alternatives on `[0, 1]` used in the power study.
//!
//! The `B_k` upper branch is `1 - 2^{k-1}(1-x)^k` and the `C_k` upper branch
//! `1/2 + 2^{k-1}(x - 1/2)^k`, the continuous monotone completions of the
//! lower branches.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{ContinuousDist, DistSpec};
use crate::error::{invalid, Result};
use crate::sample::Sample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Alternative {
    /// `F(x) = 1 - (1-x)^k`: mass pushed towards 0.
    A {
        k: f64,
    },
    /// Symmetric, mass pushed towards 1/2.
    B {
        k: f64,
    },
    /// Symmetric, mass pushed towards 0 and 1.
    C {
        k: f64,
    },
    Custom {
        dist: DistSpec,
    },
}

impl Alternative {
    pub fn a(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(Alternative::A { k })
    }

    pub fn b(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(Alternative::B { k })
    }

    pub fn c(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(Alternative::C { k })
    }

    /// `A1.5`, `B2`, `C3`, `uniform` (same as `A1`), or any distribution
    /// accepted by [`DistSpec::parse`].
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("uniform") {
            return Self::a(1.0);
        }
        let mut chars = t.chars();
        let head = chars.next();
        let rest = chars.as_str();
        if let (Some(h @ ('A' | 'B' | 'C')), Ok(k)) = (head, rest.parse::<f64>()) {
            return match h {
                'A' => Self::a(k),
                'B' => Self::b(k),
                _ => Self::c(k),
            };
        }
        DistSpec::parse(t)
            .map(|dist| Alternative::Custom { dist })
            .map_err(|_| invalid("alternative", format!("unrecognized alternative `{t}`")))
    }

    /// Parses a comma-separated list.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        split_top_level(text)
            .iter()
            .map(|s| Self::parse(s))
            .collect()
    }

    /// The eight alternatives of the standard power table.
    pub fn standard_set() -> Vec<Self> {
        vec![
            Alternative::A { k: 1.5 },
            Alternative::A { k: 2.0 },
            Alternative::B { k: 1.5 },
            Alternative::B { k: 2.0 },
            Alternative::B { k: 3.0 },
            Alternative::C { k: 1.5 },
            Alternative::C { k: 2.0 },
            Alternative::C { k: 3.0 },
        ]
    }
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(invalid("k", "shape k must be positive"));
    }
    Ok(())
}

impl ContinuousDist for Alternative {
    fn cdf(&self, t: f64) -> f64 {
        if let Alternative::Custom { dist } = self {
            return dist.cdf(t);
        }
        let x = t.clamp(0.0, 1.0);
        let f = match *self {
            Alternative::A { k } => 1.0 - (1.0 - x).powf(k),
            Alternative::B { k } => {
                let c = 2f64.powf(k - 1.0);
                if x < 0.5 {
                    c * x.powf(k)
                } else {
                    1.0 - c * (1.0 - x).powf(k)
                }
            }
            Alternative::C { k } => {
                let c = 2f64.powf(k - 1.0);
                if x < 0.5 {
                    0.5 - c * (0.5 - x).powf(k)
                } else {
                    0.5 + c * (x - 0.5).powf(k)
                }
            }
            Alternative::Custom { .. } => unreachable!(),
        };
        f.clamp(0.0, 1.0)
    }

    fn inv_cdf(&self, u: f64) -> f64 {
        match self {
            Alternative::A { k } => 1.0 - (1.0 - u).powf(1.0 / k),
            Alternative::B { k } => {
                let c = 2f64.powf(1.0 - k);
                if u < 0.5 {
                    (u * c).powf(1.0 / k)
                } else {
                    1.0 - ((1.0 - u) * c).powf(1.0 / k)
                }
            }
            Alternative::C { k } => {
                let c = 2f64.powf(1.0 - k);
                if u < 0.5 {
                    0.5 - ((0.5 - u) * c).powf(1.0 / k)
                } else {
                    0.5 + ((u - 0.5) * c).powf(1.0 / k)
                }
            }
            Alternative::Custom { dist } => dist.inv_cdf(u),
        }
    }

    fn label(&self) -> String {
        match self {
            Alternative::A { k } => format!("A{k}"),
            Alternative::B { k } => format!("B{k}"),
            Alternative::C { k } => format!("C{k}"),
            Alternative::Custom { dist } => dist.label(),
        }
    }
}

/// `n` inverse-cdf draws from `alt`.
pub fn sample_alternative<R: Rng + ?Sized>(
    alt: &Alternative,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    if n == 0 {
        return Err(invalid("n", "sample size must be positive"));
    }
    let mut buf = Vec::with_capacity(n);
    fill_alternative(alt, n, rng, &mut buf);
    Sample::new(buf)
}

/// Refills `buf` with `n` draws; the allocation-free path used inside
/// Monte Carlo loops.
pub(crate) fn fill_alternative<R: Rng + ?Sized>(
    alt: &Alternative,
    n: usize,
    rng: &mut R,
    buf: &mut Vec<f64>,
) {
    buf.clear();
    for _ in 0..n {
        let u: f64 = rng.sample(Open01);
        buf.push(alt.inv_cdf(u));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn parse_forms() {
        assert_eq!(
            Alternative::parse("A1.5").unwrap(),
            Alternative::A { k: 1.5 }
        );
        assert_eq!(Alternative::parse("C3").unwrap(), Alternative::C { k: 3.0 });
        assert_eq!(
            Alternative::parse("uniform").unwrap(),
            Alternative::A { k: 1.0 }
        );
        assert!(Alternative::parse("B0").is_err());
        assert!(Alternative::parse("Z2").is_err());
        let list = Alternative::parse_list("A2,normal(0.5,0.1),B3").unwrap();
        assert_eq!(list.len(), 3);
        assert!(matches!(list[1], Alternative::Custom { .. }));
    }

    #[test]
    fn a_one_is_uniform() {
        let a = Alternative::A { k: 1.0 };
        for u in [0.0, 0.1, 0.5, 0.93] {
            assert!((a.inv_cdf(u) - u).abs() < 1e-15);
        }
    }

    #[test]
    fn b_median_is_half() {
        for k in [1.5, 2.0, 3.0] {
            assert!((Alternative::B { k }.inv_cdf(0.5) - 0.5).abs() < 1e-15);
            assert!((Alternative::B { k }.cdf(0.5) - 0.5).abs() < 1e-15);
            assert!((Alternative::C { k }.cdf(0.5) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn cdfs_valid_and_invert() {
        for alt in Alternative::standard_set() {
            assert_eq!(alt.cdf(0.0), 0.0);
            assert!((alt.cdf(1.0) - 1.0).abs() < 1e-15);
            let mut prev = 0.0;
            for i in 0..=1000 {
                let x = i as f64 / 1000.0;
                let f = alt.cdf(x);
                assert!(f >= prev, "{}", alt.label());
                prev = f;
            }
            for i in 1..100 {
                let u = i as f64 / 100.0;
                assert!(
                    (alt.cdf(alt.inv_cdf(u)) - u).abs() < 1e-12,
                    "{}",
                    alt.label()
                );
            }
        }
    }

    #[test]
    fn draws_in_unit_interval() {
        let mut rng = RngStream::new(1).rng();
        for alt in Alternative::standard_set() {
            let s = sample_alternative(&alt, 200, &mut rng).unwrap();
            assert!(s.values().iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }
}
