//! Families of conics over polynomial rings: discriminant and σ ideals,
//! generic smoothness, brute-force Jacobian scans over finite fields,
//! p-power structure of δ, and specialization to power series.

use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{Elem, Embedding, Field, Mat3, Poly, Ring, Scalar, Series};
use crate::fiberlab::projective_points;
use crate::quadform::{act, delta, sigma_generators, sigma_prime, SigmaGens, TernaryForm};

/// Default bound on `#base points * #P^2 points` for a scan.
pub const SCAN_LIMIT: u64 = 1 << 26;

/// A conic bundle `{Q = 0}` over affine or projective space.
///
/// For a projective base the coefficients are homogeneous in the base
/// variables and scans run over the standard charts.
#[derive(Clone, Debug)]
pub struct Family {
    pub base_vars: Arc<Vec<String>>,
    pub field: Field,
    pub form: TernaryForm<Poly>,
    pub projective: bool,
}

impl Family {
    pub fn new(form: TernaryForm<Poly>) -> Result<Family> {
        Family::build(form, false)
    }

    pub fn projective(form: TernaryForm<Poly>) -> Result<Family> {
        Family::build(form, true)
    }

    fn build(form: TernaryForm<Poly>, projective: bool) -> Result<Family> {
        if form.is_zero() {
            return Err(Error::ZeroForm);
        }
        let field = form.a.field().clone();
        let base_vars = form.a.vars().clone();
        for c in form.coeffs() {
            if c.field() != &field || c.vars() != &base_vars {
                return Err(Error::RingMismatch);
            }
        }
        if projective {
            if base_vars.is_empty() {
                return Err(Error::Inconsistent("a projective base needs at least one variable".into()));
            }
            let degs: Vec<u32> = form
                .coeffs()
                .iter()
                .flat_map(|c| c.terms().keys().map(|e| e.iter().sum::<u32>()))
                .collect();
            if degs.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Inconsistent("coefficients over a projective base must share one degree".into()));
            }
        }
        Ok(Family { base_vars, field, form, projective })
    }

    pub fn dim(&self) -> usize {
        if self.projective {
            self.base_vars.len() - 1
        } else {
            self.base_vars.len()
        }
    }

    /// The conic over a base point (one scalar per base variable).
    pub fn fiber_at(&self, point: &[Scalar]) -> TernaryForm<Scalar> {
        self.form.map(|c| eval_in(c, point))
    }

    pub fn act(&self, m: &Mat3<Poly>) -> Result<Family> {
        Ok(Family { form: act(&self.form, m)?, ..self.clone() })
    }

    pub fn embed(&self, emb: &Embedding) -> Family {
        Family { field: emb.target.clone(), form: self.form.map(|c| c.embed(emb)), ..self.clone() }
    }
}

/// Evaluate `p` at a point whose coordinates may live in an extension.
fn eval_in(p: &Poly, point: &[Scalar]) -> Scalar {
    let Some(x) = point.first() else { return p.constant_term() };
    if &x.field == p.field() {
        return p.eval(point);
    }
    let emb = Embedding::new(p.field().clone(), x.field.clone()).expect("point field extends the base field");
    p.embed(&emb).eval(point)
}

pub fn discriminant_poly(f: &Family) -> Poly {
    delta(&f.form)
}

pub fn sigma_ideal_gens(f: &Family) -> SigmaGens<Poly> {
    sigma_generators(&f.form)
}

pub fn sigma_prime_gens(f: &Family) -> Result<[Poly; 3]> {
    sigma_prime(&f.form)
}

/// The generic fibre is smooth iff δ is a nonzero polynomial.
pub fn is_generically_smooth(f: &Family) -> bool {
    !discriminant_poly(f).is_zero()
}

/// δ vanishes identically. Normality of the total space is not checked.
pub fn is_wild_candidate(f: &Family) -> bool {
    discriminant_poly(f).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WildnessReport {
    pub wild_candidate: bool,
    pub notes: Vec<String>,
}

pub fn wildness_report(f: &Family) -> WildnessReport {
    let wild_candidate = is_wild_candidate(f);
    let mut notes = vec!["normality of the total space is not verified".to_string()];
    if wild_candidate && f.field.characteristic() != 2 {
        notes.push(
            "δ vanishes outside characteristic 2, where a normal total space forces a smooth generic fibre; \
             the total space is probably not normal"
                .to_string(),
        );
    }
    WildnessReport { wild_candidate, notes }
}

/// A point of the base together with a point of the fibre.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScanPoint {
    pub base: Vec<Scalar>,
    pub fiber: [Scalar; 3],
}

impl Serialize for ScanPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ScanPoint", 2)?;
        st.serialize_field("base", &self.base.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("fiber", &self.fiber.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanVerdict {
    NoSingularPointFound,
    SingularPointsFound,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub field_scanned: String,
    pub extension_degree: u32,
    pub points_scanned: u64,
    pub singular_points: Vec<ScanPoint>,
    pub verdict: ScanVerdict,
}

/// Points of the base over `k`, in canonical order. Projective points have
/// first nonzero coordinate 1; the returned index is that coordinate.
fn base_points(dim_vars: usize, projective: bool, k: &Field) -> Vec<(Vec<Elem>, Option<usize>)> {
    let els: Vec<Elem> = k.elements().collect();
    let affine = |n: usize| -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    els.iter().map(move |e| {
                        let mut q = p.clone();
                        q.push(e.clone());
                        q
                    })
                })
                .collect();
        }
        out
    };
    if !projective {
        return affine(dim_vars).into_iter().map(|p| (p, None)).collect();
    }
    let mut out = Vec::new();
    for lead in 0..dim_vars {
        for tail in affine(dim_vars - lead - 1) {
            let mut p = vec![k.zero(); lead];
            p.push(k.one());
            p.extend(tail);
            out.push((p, Some(lead)));
        }
    }
    out
}

fn count_base_points(f: &Family, q: u64) -> Option<u64> {
    let d = f.dim() as u32;
    if f.projective {
        // 1 + q + ... + q^d
        (0..=d).try_fold(0u64, |acc, i| acc.checked_add(q.checked_pow(i)?))
    } else {
        q.checked_pow(d)
    }
}

/// The scan field `F_{q^d}` and the family moved into it.
fn scan_setup(f: &Family, ext_degree: u32, max_points: Option<u64>) -> Result<(Field, Family, u64)> {
    if !f.field.is_finite() {
        return Err(Error::Unsupported("scans need a finite base field".into()));
    }
    if ext_degree == 0 {
        return Err(Error::Inconsistent("extension degree must be positive".into()));
    }
    let q0 = f.field.order().unwrap();
    let limit = max_points.unwrap_or(SCAN_LIMIT);
    let too_large = || Error::TooLarge(format!("more than {limit} points over {}^{ext_degree}", f.field.name()));
    let q = q0.checked_pow(ext_degree).ok_or_else(too_large)?;
    let p2 = q.checked_mul(q).and_then(|x| x.checked_add(q + 1)).ok_or_else(too_large)?;
    let total = count_base_points(f, q).and_then(|b| b.checked_mul(p2)).ok_or_else(too_large)?;
    if total > limit {
        return Err(too_large());
    }
    let (k, fam) = if ext_degree == 1 {
        (f.field.clone(), f.clone())
    } else {
        let emb = f.field.extend(ext_degree)?;
        (emb.target.clone(), f.embed(&emb))
    };
    Ok((k, fam, total))
}

/// Partial derivatives of the coefficients, in affine coordinates of the
/// chart `lead` for projective bases.
fn chart_partials(f: &Family, lead: Option<usize>) -> Vec<TernaryForm<Poly>> {
    (0..f.base_vars.len()).filter(|&j| Some(j) != lead).map(|j| f.form.map(|c| c.partial(j))).collect()
}

/// Every point of `base x P^2` over `F_{q^d}` where `Q`, its three fibre
/// partials and its base partials all vanish.
pub fn singular_points_scan(f: &Family, ext_degree: u32) -> Result<ScanReport> {
    singular_points_scan_bounded(f, ext_degree, None)
}

pub fn singular_points_scan_bounded(f: &Family, ext_degree: u32, max_points: Option<u64>) -> Result<ScanReport> {
    let (k, fam, total) = scan_setup(f, ext_degree, max_points)?;
    let fibre_pts: Vec<[Scalar; 3]> = projective_points(&k).map(|p| p.map(|e| Scalar::new(&k, e))).collect();
    let charts: Vec<Option<usize>> = if fam.projective { (0..fam.base_vars.len()).map(Some).collect() } else { vec![None] };
    let partials: Vec<(Option<usize>, Vec<TernaryForm<Poly>>)> =
        charts.into_iter().map(|c| (c, chart_partials(&fam, c))).collect();
    let points = base_points(fam.base_vars.len(), fam.projective, &k);
    let mut found: Vec<ScanPoint> = points
        .par_iter()
        .flat_map_iter(|(pt, lead)| {
            let base: Vec<Scalar> = pt.iter().map(|e| Scalar::new(&k, e.clone())).collect();
            let q = fam.fiber_at(&base);
            let dq: Vec<TernaryForm<Scalar>> = partials
                .iter()
                .find(|(c, _)| c == lead)
                .unwrap()
                .1
                .iter()
                .map(|d| d.map(|c| c.eval(&base)))
                .collect();
            fibre_pts
                .iter()
                .filter(|v| {
                    q.eval(v).is_zero()
                        && q.gradient(v).iter().all(|g| g.is_zero())
                        && dq.iter().all(|d| d.eval(v).is_zero())
                })
                .map(|v| ScanPoint { base: base.clone(), fiber: v.clone() })
                .collect::<Vec<_>>()
        })
        .collect();
    found.sort();
    let verdict = if found.is_empty() { ScanVerdict::NoSingularPointFound } else { ScanVerdict::SingularPointsFound };
    Ok(ScanReport {
        field_scanned: k.name(),
        extension_degree: ext_degree,
        points_scanned: total,
        singular_points: found,
        verdict,
    })
}

/// `δ = h^{p^e}` with `h` not a `p`-th power.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerProfile {
    pub e: u32,
    pub h: Poly,
}

impl Serialize for PowerProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PowerProfile", 2)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("h", &self.h.to_string())?;
        st.end()
    }
}

pub fn delta_power_profile(f: &Family) -> Result<PowerProfile> {
    if f.field.characteristic() == 0 {
        return Err(Error::WrongCharacteristic);
    }
    let d = discriminant_poly(f);
    if d.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let mut h = d;
    let mut e = 0;
    // Constants are p-th powers forever; stop once h is constant.
    while !h.is_constant() {
        match h.pth_root() {
            Some(r) => {
                h = r;
                e += 1;
            }
            None => break,
        }
    }
    Ok(PowerProfile { e, h })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonregMismatch {
    pub base: Vec<String>,
    pub delta_singular: bool,
    pub sigma_vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonregReport {
    pub field_scanned: String,
    pub extension_degree: u32,
    pub base_points_scanned: u64,
    pub discriminant_points: u64,
    pub nonregular_points: u64,
    pub mismatches: Vec<NonregMismatch>,
    pub holds: bool,
    pub assumptions: Vec<String>,
}

/// At every `F_{q^d}`-point of `{δ = 0}`, compare "all partials of δ
/// vanish" with "all σ generators vanish".
pub fn nonreg_equals_sigma_check(f: &Family, ext_degree: u32) -> Result<NonregReport> {
    nonreg_equals_sigma_check_bounded(f, ext_degree, None)
}

pub fn nonreg_equals_sigma_check_bounded(
    f: &Family,
    ext_degree: u32,
    max_points: Option<u64>,
) -> Result<NonregReport> {
    let (k, fam, _) = scan_setup(f, ext_degree, max_points)?;
    let d = discriminant_poly(&fam);
    let sig = sigma_ideal_gens(&fam);
    let nvars = fam.base_vars.len();
    let grads: Vec<(Option<usize>, Vec<Poly>)> = if fam.projective {
        (0..nvars).map(|l| (Some(l), (0..nvars).filter(|&j| j != l).map(|j| d.partial(j)).collect())).collect()
    } else {
        vec![(None, (0..nvars).map(|j| d.partial(j)).collect())]
    };
    let points = base_points(nvars, fam.projective, &k);
    let rows: Vec<(bool, bool, Vec<Scalar>)> = points
        .par_iter()
        .filter_map(|(pt, lead)| {
            let base: Vec<Scalar> = pt.iter().map(|e| Scalar::new(&k, e.clone())).collect();
            if !d.eval(&base).is_zero() {
                return None;
            }
            let g = &grads.iter().find(|(c, _)| c == lead).unwrap().1;
            let singular = g.iter().all(|p| p.eval(&base).is_zero());
            let vanish = sig.0.iter().all(|p| p.eval(&base).is_zero());
            Some((singular, vanish, base))
        })
        .collect();
    let mut mismatches: Vec<NonregMismatch> = rows
        .iter()
        .filter(|(a, b, _)| a != b)
        .map(|(a, b, base)| NonregMismatch {
            base: base.iter().map(|x| x.to_string()).collect(),
            delta_singular: *a,
            sigma_vanishes: *b,
        })
        .collect();
    mismatches.sort_by(|x, y| x.base.cmp(&y.base));
    Ok(NonregReport {
        field_scanned: k.name(),
        extension_degree: ext_degree,
        base_points_scanned: points.len() as u64,
        discriminant_points: rows.len() as u64,
        nonregular_points: rows.iter().filter(|r| r.0).count() as u64,
        holds: mismatches.is_empty(),
        mismatches,
        assumptions: vec![
            "the total space is regular".into(),
            "the base is regular".into(),
            "the generic fibre is smooth".into(),
            "a mismatch means one of these fails, not that the equality is false".into(),
        ],
    })
}

/// Substitute scalars for every base variable except `var`, and expand the
/// coefficients as power series in `var` to the given precision. The
/// scalars may lie in an extension of the family's field.
pub fn specialize_to_series(
    f: &Family,
    var: &str,
    assignments: &[(&str, Scalar)],
    precision: usize,
) -> Result<TernaryForm<Series>> {
    let vi = f
        .base_vars
        .iter()
        .position(|v| v == var)
        .ok_or_else(|| Error::Inconsistent(format!("no base variable named {var}")))?;
    let target = assignments.first().map_or(f.field.clone(), |(_, s)| s.field.clone());
    let emb = if target == f.field { Embedding::identity(&f.field) } else { Embedding::new(f.field.clone(), target.clone())? };
    let mut values: Vec<Option<Elem>> = vec![None; f.base_vars.len()];
    for (name, s) in assignments {
        let j = f
            .base_vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Inconsistent(format!("no base variable named {name}")))?;
        if j == vi {
            return Err(Error::Inconsistent(format!("{name} is the series variable")));
        }
        if s.field != target {
            return Err(Error::RingMismatch);
        }
        values[j] = Some(s.value.clone());
    }
    if let Some(j) = (0..values.len()).find(|&j| j != vi && values[j].is_none()) {
        return Err(Error::Inconsistent(format!("no value for {}", f.base_vars[j])));
    }
    let name: Arc<str> = Arc::from(var);
    let expand = |p: &Poly| {
        let mut cs = vec![target.zero(); precision];
        for (e, c) in p.terms() {
            let k = e[vi] as usize;
            if k >= precision {
                continue;
            }
            let mut v = emb.map(c);
            for (j, &d) in e.iter().enumerate() {
                if j != vi && d > 0 {
                    v = target.mul(&v, &target.pow(values[j].as_ref().unwrap(), d as u64));
                }
            }
            cs[k] = target.add(&cs[k], &v);
        }
        Series::from_coeffs(&target, &name, precision, &cs)
    };
    Ok(f.form.map(expand))
}
