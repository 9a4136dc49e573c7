//! Conic bundles over `k[[t]]` (truncated): reduction to the canonical
//! local forms, and the surface singularity classification by degree of the
//! discriminant and reducedness of the central fibre.
//!
//! Every reduction keeps the invariant `form = unit * act(Q, transform)`
//! exactly modulo `t^N`. Coordinate changes are exact polynomials in `t`;
//! when a parameter is computed from a quotient by `t^m`, the unknown top
//! coefficients are set to zero, and the final comparison against the
//! canonical form decides how much of the result is trustworthy.

mod char2;
mod char_ne2;
mod surface;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Elem, Embedding, Field, Mat3, Ring, Scalar, Series, Valuation};
use crate::fiberlab::{classify_fiber, FiberType};
use crate::quadform::{TernaryForm, Tracker};

pub use char2::{
    locate_singularity_char2, normalize_char2_nonreduced, normalize_char2_nonreduced_stage1,
    normalize_char2_reduced, SingularPoint, Stage1,
};
pub use char_ne2::normalize_char_ne2;
pub use surface::{
    artin_refine, classify_surface_singularity, ArtinFamily, ArtinLabel, SingularityReport, Verdict,
};

/// Coefficients above `N - GUARD` are not trusted.
pub const GUARD: usize = 4;

/// Default working precision.
pub const DEFAULT_PRECISION: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocalTag {
    /// The central fibre is already smooth.
    Smooth,
    Char0Red(usize),
    Char0NonRed(usize),
    Char2Red(usize),
    Char2NonRedI(usize),
    Char2NonRedII(usize),
}

impl LocalTag {
    pub fn n(self) -> Option<usize> {
        match self {
            LocalTag::Smooth => None,
            LocalTag::Char0Red(n)
            | LocalTag::Char0NonRed(n)
            | LocalTag::Char2Red(n)
            | LocalTag::Char2NonRedI(n)
            | LocalTag::Char2NonRedII(n) => Some(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LocalTag::Smooth => "Smooth",
            LocalTag::Char0Red(_) => "Char0Red",
            LocalTag::Char0NonRed(_) => "Char0NonRed",
            LocalTag::Char2Red(_) => "Char2Red",
            LocalTag::Char2NonRedI(_) => "Char2NonRedI",
            LocalTag::Char2NonRedII(_) => "Char2NonRedII",
        }
    }

    /// `v_t(δ)` of the canonical form.
    pub fn delta_degree(self) -> usize {
        match self {
            LocalTag::Smooth => 0,
            LocalTag::Char0Red(n) | LocalTag::Char2Red(n) => n + 1,
            LocalTag::Char0NonRed(n) => n,
            LocalTag::Char2NonRedI(n) => 2 * n,
            LocalTag::Char2NonRedII(n) => 2 * n + 1,
        }
    }

    pub fn central_reduced(self) -> bool {
        matches!(self, LocalTag::Smooth | LocalTag::Char0Red(_) | LocalTag::Char2Red(_))
    }
}

impl fmt::Display for LocalTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n() {
            Some(n) => write!(f, "{}({n})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LocalFormResult {
    pub tag: LocalTag,
    /// Known modulo `t^precision`.
    pub canonical_form: TernaryForm<Series>,
    pub transform: Mat3<Series>,
    pub unit: Series,
    pub precision: usize,
    pub notes: Vec<String>,
}

/// The canonical form for `tag` at precision `n`. `Smooth` gives
/// `x^2 + y^2 + z^2` away from characteristic 2 and `x^2 + yz` in it.
pub fn canonical_form(tag: LocalTag, field: &Field, var: &Arc<str>, precision: usize) -> TernaryForm<Series> {
    let ctx = Ctx { field: field.clone(), var: var.clone(), n: precision };
    let t = |k: usize| ctx.t_pow(k);
    let z = ctx.zero();
    let o = ctx.one();
    let (a, b, c, al, ga) = match tag {
        LocalTag::Smooth if field.characteristic() == 2 => (o.clone(), z.clone(), z.clone(), o, z.clone()),
        LocalTag::Smooth => (o.clone(), o.clone(), o, z.clone(), z.clone()),
        LocalTag::Char0Red(n) => (o.clone(), o, t(n + 1), z.clone(), z.clone()),
        LocalTag::Char0NonRed(n) => (o, t(1), t(n.saturating_sub(1)), z.clone(), z.clone()),
        LocalTag::Char2Red(n) => (z.clone(), z.clone(), t(n + 1), z.clone(), o),
        LocalTag::Char2NonRedI(n) => (t(1), z.clone(), o, z.clone(), t(n)),
        LocalTag::Char2NonRedII(n) => (o, z.clone(), t(1), z.clone(), t(n)),
    };
    TernaryForm::new(a, b, c, al, z, ga)
}

/// True iff some coefficient is a unit.
pub fn is_conic_bundle_local(q: &TernaryForm<Series>) -> bool {
    q.coeffs().iter().any(|c| c.is_unit())
}

/// The conic over the residue field.
pub fn central_fiber(q: &TernaryForm<Series>) -> Result<TernaryForm<Scalar>> {
    if !is_conic_bundle_local(q) {
        return Err(Error::NotConicBundle);
    }
    Ok(q.map(|c| c.constant_term()))
}

/// Reduce `q` along the branch selected by its characteristic and central
/// fibre.
pub fn normalize(q: &TernaryForm<Series>) -> Result<LocalFormResult> {
    let fiber = classify_fiber(&central_fiber(q)?)?;
    if q.a.field().characteristic() != 2 {
        normalize_char_ne2(q)
    } else if fiber == FiberType::NonReduced {
        normalize_char2_nonreduced(q)
    } else {
        normalize_char2_reduced(q)
    }
}

/// [`normalize`], and on `NoResidueRoot` retry over extensions of degree
/// 2, 4, ... up to total degree `max_degree`. Returns the embedding used
/// when an extension was needed.
pub fn normalize_extending(
    q: &TernaryForm<Series>,
    max_degree: u32,
) -> Result<(LocalFormResult, Option<Embedding>)> {
    let first = match normalize(q) {
        Ok(r) => return Ok((r, None)),
        Err(e @ Error::NoResidueRoot(_)) => e,
        Err(e) => return Err(e),
    };
    let base = q.a.field().clone();
    if base.characteristic() == 0 {
        return Err(first);
    }
    let mut d = 2;
    let mut last = first;
    while base.degree() * d <= max_degree {
        let emb = base.extend(d)?;
        let big = embed_series_form(q, &emb);
        match normalize(&big) {
            Ok(r) => return Ok((r, Some(emb))),
            Err(e @ Error::NoResidueRoot(_)) => last = e,
            Err(e) => return Err(e),
        }
        d *= 2;
    }
    Err(last)
}

pub fn embed_series_form(q: &TernaryForm<Series>, emb: &Embedding) -> TernaryForm<Series> {
    q.map(|c| c.embed(emb))
}

/// Working data shared by the reductions: the field, the series variable,
/// and the precision `N`.
#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub field: Field,
    pub var: Arc<str>,
    pub n: usize,
}

impl Ctx {
    pub fn for_form(q: &TernaryForm<Series>) -> Result<Ctx> {
        let n = q.coeffs().iter().map(|c| c.precision()).min().unwrap();
        if n <= GUARD + 1 {
            return Err(Error::PrecisionExhausted(format!("precision {n} leaves nothing above the guard band")));
        }
        if !is_conic_bundle_local(q) {
            return Err(Error::NotConicBundle);
        }
        Ok(Ctx { field: q.a.field().clone(), var: q.a.var_name().clone(), n })
    }

    pub fn trusted(&self) -> usize {
        self.n - GUARD
    }

    pub fn zero(&self) -> Series {
        Series::zero(&self.field, &self.var, self.n)
    }

    pub fn one(&self) -> Series {
        self.constant(&self.field.one())
    }

    pub fn constant(&self, c: &Elem) -> Series {
        Series::monomial(&self.field, &self.var, self.n, c.clone(), 0)
    }

    pub fn scalar(&self, c: &Scalar) -> Series {
        self.constant(&c.value)
    }

    pub fn t_pow(&self, k: usize) -> Series {
        Series::monomial(&self.field, &self.var, self.n, self.field.one(), k)
    }

    /// `c t^k`.
    pub fn mono(&self, c: &Scalar, k: usize) -> Series {
        Series::monomial(&self.field, &self.var, self.n, c.value.clone(), k)
    }

    /// A series at full precision, unknown tail set to zero.
    pub fn pad(&self, s: &Series) -> Series {
        s.padded(self.n)
    }

    pub fn pad_form(&self, q: &TernaryForm<Series>) -> TernaryForm<Series> {
        q.map(|c| c.truncate(self.n))
    }

    /// `s / t^m` as an exact polynomial of full precision.
    pub fn div_t(&self, s: &Series, m: usize) -> Series {
        if m == 0 {
            return s.clone();
        }
        self.pad(&s.shift_down(m))
    }

    /// A valuation the reduction is allowed to rely on.
    pub fn guard(&self, s: &Series, what: &str) -> Result<usize> {
        match s.valuation() {
            Valuation::Finite(v) if v <= self.trusted() => Ok(v),
            v => Err(Error::PrecisionExhausted(format!(
                "valuation of {what} is {v}, beyond the trusted range {}",
                self.trusted()
            ))),
        }
    }

    /// Compare with the canonical form and package the certificate.
    pub fn finish(&self, tr: Tracker<Series>, tag: LocalTag, mut notes: Vec<String>) -> Result<LocalFormResult> {
        let prec = self.trusted();
        let canon = canonical_form(tag, &self.field, &self.var, self.n);
        for (name, (got, want)) in
            crate::quadform::COEFF_NAMES.iter().zip(tr.form.coeffs().iter().zip(canon.coeffs()))
        {
            let diff = (*got).clone() - want.clone();
            let agree = diff.valuation().lower_bound();
            if agree < prec {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {name} agrees with {tag} only modulo {}^{agree}",
                    self.var
                )));
            }
        }
        notes.push(format!("valid modulo {}^{prec}", self.var));
        Ok(LocalFormResult {
            tag,
            canonical_form: canon.map(|c| c.truncate(prec)),
            transform: tr.transform,
            unit: tr.unit,
            precision: prec,
            notes,
        })
    }
}

#[cfg(test)]
mod tests;
