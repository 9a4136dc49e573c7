//! Singularity type of the total space of a conic bundle over a curve, and
//! the finer labels for the characteristic-2 `D` families.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Ring, Series};
use crate::quadform::TernaryForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    RegularTotalSpace,
    UniqueA(usize),
    TwoA1,
    UniqueD(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub deg_delta: usize,
    pub central_reduced: bool,
    /// Components of the central fibre after resolving.
    pub m: usize,
    pub verdict: Verdict,
}

/// Degree 0 is a smooth central fibre and counts as regular.
pub fn classify_surface_singularity(deg_delta: usize, central_reduced: bool) -> Result<SingularityReport> {
    let verdict = match (central_reduced, deg_delta) {
        (true, 0 | 1) => Verdict::RegularTotalSpace,
        (true, d) => Verdict::UniqueA(d - 1),
        (false, 2) => Verdict::TwoA1,
        (false, d) if d >= 3 => Verdict::UniqueD(d),
        (false, d) => {
            return Err(Error::Inconsistent(format!(
                "a non-reduced central fibre needs deg Δ ≥ 2, got {d}"
            )))
        }
    };
    Ok(SingularityReport { deg_delta, central_reduced, m: deg_delta + 1, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ArtinFamily {
    /// `x^2 + ty^2 + t^{2r}z^2 + t^s xy`: `D^r_{2r+2s}`.
    DEven { r: usize, s: usize },
    /// `x^2 + ty^2 + t^{2r+1}z^2 + t^s xy`: `D^r_{2r+2s+1}`.
    DOdd { r: usize, s: usize },
    /// `tx^2 + z^2 + t^n xy`, `n ≥ 2`: `D^0_{2n}`.
    D0Even { n: usize },
    /// `x^2 + tz^2 + t^n xy`: `D^0_{2n+1}`.
    D0Odd { n: usize },
    /// `tx^2 + z^2 + t xy`: two `A_1` points.
    TwoA1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArtinLabel {
    pub family: ArtinFamily,
    /// For example `D^1_4`.
    pub label: String,
    /// Affine equation in `(t, x, y)` after `x -> x + t^r`, even family only.
    pub artin_local_equation: Option<Poly>,
}

/// `Some(k)` when `s` is exactly `t^k`, `Some(usize::MAX)` when zero.
fn monomial_degree(s: &Series) -> Option<usize> {
    if s.is_zero() {
        return Some(usize::MAX);
    }
    let k = s.valuation().finite()?;
    let rest = s.clone() - Series::monomial(s.field(), s.var_name(), s.precision(), s.field().one(), k);
    rest.is_zero().then_some(k)
}

pub fn artin_refine(q: &TernaryForm<Series>) -> Result<ArtinLabel> {
    let unrecognized = || Error::UnrecognizedFamily(format!("{q}"));
    if q.a.field().characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    let d = |s: &Series| monomial_degree(s).ok_or_else(unrecognized);
    let (a, b, c, al, be, ga) = (d(&q.a)?, d(&q.b)?, d(&q.c)?, d(&q.alpha)?, d(&q.beta)?, d(&q.gamma)?);
    const ZERO: usize = usize::MAX;
    if al != ZERO || be != ZERO || ga == ZERO || ga == 0 {
        return Err(unrecognized());
    }
    let s = ga;
    let label = |r: usize, n: usize| format!("D^{r}_{n}");
    Ok(match (a, b, c) {
        (0, 1, c) if c >= 2 && c != ZERO && c % 2 == 0 => {
            let r = c / 2;
            ArtinLabel {
                family: ArtinFamily::DEven { r, s },
                label: label(r, 2 * r + 2 * s),
                artin_local_equation: Some(artin_equation(q.a.field(), r, s)),
            }
        }
        (0, 1, c) if c >= 3 && c != ZERO => {
            let r = (c - 1) / 2;
            ArtinLabel {
                family: ArtinFamily::DOdd { r, s },
                label: label(r, 2 * r + 2 * s + 1),
                artin_local_equation: None,
            }
        }
        (1, ZERO, 0) if s == 1 => {
            ArtinLabel { family: ArtinFamily::TwoA1, label: "2A_1".into(), artin_local_equation: None }
        }
        (1, ZERO, 0) => ArtinLabel {
            family: ArtinFamily::D0Even { n: s },
            label: label(0, 2 * s),
            artin_local_equation: None,
        },
        (0, ZERO, 1) => ArtinLabel {
            family: ArtinFamily::D0Odd { n: s },
            label: label(0, 2 * s + 1),
            artin_local_equation: None,
        },
        _ => return Err(unrecognized()),
    })
}

/// Substitute `x -> x + t^r` into the chart `z = 1` of
/// `x^2 + ty^2 + t^{2r} + t^s xy` and check the result is
/// `x^2 + ty^2 + t^s xy + t^{r+s} y`.
fn artin_equation(field: &crate::exactalg::Field, r: usize, s: usize) -> Poly {
    let vars = Arc::new(vec!["t".to_string(), "x".to_string(), "y".to_string()]);
    let v = |i| Poly::var(field, &vars, i);
    let (t, x, y) = (v(0), v(1), v(2));
    let (r, s) = (r as u32, s as u32);
    let chart = x.pow(2) + t.clone() * y.pow(2) + t.pow(2 * r) + t.pow(s) * x.clone() * y.clone();
    let shifted = chart.compose(&[t.clone(), x.clone() + t.pow(r), y.clone()]);
    let expected = x.pow(2) + t.clone() * y.pow(2) + t.pow(s) * x * y.clone() + t.pow(r + s) * y;
    assert_eq!(shifted, expected, "substitution check failed for r={r}, s={s}");
    shifted
}
