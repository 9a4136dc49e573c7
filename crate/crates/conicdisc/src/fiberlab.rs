//! Single conics over a field: classification through δ and σ, field normal
//! forms, and a brute-force oracle over finite fields that never looks at δ
//! or σ.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Axis, ElementaryMove, Elem, Embedding, Field, Mat3, Ring, Scalar};
use crate::quadform::{delta, gram_matrix, sigma_generators, TernaryForm, Tracker};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FiberType {
    Smooth,
    ReducedSingular,
    NonReduced,
}

/// Smooth iff `δ ≠ 0`, non-reduced iff every σ generator vanishes.
pub fn classify_fiber(q: &TernaryForm<Scalar>) -> Result<FiberType> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(if !delta(q).is_zero() {
        FiberType::Smooth
    } else if sigma_generators(q).all_zero() {
        FiberType::NonReduced
    } else {
        FiberType::ReducedSingular
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldFormTag {
    DiagRank3,
    DiagRank2,
    DiagRank1,
    #[serde(rename = "DoubleLine_x2")]
    DoubleLineX2,
    #[serde(rename = "Cross_yz")]
    CrossYz,
    #[serde(rename = "Smooth_x2yz")]
    SmoothX2Yz,
}

#[derive(Clone, Debug)]
pub struct FieldNormalForm {
    pub tag: FieldFormTag,
    pub transform: Mat3<Scalar>,
    pub unit: Scalar,
    /// `unit * act(Q, transform)`.
    pub canonical: TernaryForm<Scalar>,
}

pub fn field_normal_form(q: &TernaryForm<Scalar>) -> Result<FieldNormalForm> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let tr = if q.a.field.characteristic() == 2 { normal_form_char2(q)? } else { diagonalize(q) };
    let (tr, tag) = tr;
    debug_assert_eq!(tr.form, q.act_unchecked(&tr.transform).scale(&tr.unit));
    Ok(FieldNormalForm { tag, transform: tr.transform, unit: tr.unit, canonical: tr.form })
}

fn diagonalize(q: &TernaryForm<Scalar>) -> (Tracker<Scalar>, FieldFormTag) {
    let mut tr = Tracker::new(q);
    let ax = Axis::from_index;
    for i in 0..3 {
        if tr.form.square_coeff(i).is_zero() {
            if let Some(j) = (i + 1..3).find(|&j| !tr.form.square_coeff(j).is_zero()) {
                tr.apply(ElementaryMove::swap(ax(i), ax(j)));
            } else if let Some(j) = (i + 1..3).find(|&j| !tr.form.cross_coeff(i, j).is_zero()) {
                tr.apply(ElementaryMove::shear(ax(j), ax(i), q.a.one_like()));
            } else if i == 0 && !tr.form.alpha.is_zero() {
                // Only the yz term is left.
                tr.apply(ElementaryMove::swap(Axis::X, Axis::Y));
                tr.apply(ElementaryMove::shear(Axis::Z, Axis::X, q.a.one_like()));
            } else {
                continue;
            }
        }
        let two_a = tr.form.square_coeff(i).int_like(2) * tr.form.square_coeff(i).clone();
        let inv = two_a.inverse().expect("pivot is nonzero");
        for j in i + 1..3 {
            let cross = tr.form.cross_coeff(i, j).clone();
            if !cross.is_zero() {
                tr.apply(ElementaryMove::shear(ax(i), ax(j), -(cross * inv.clone())));
            }
        }
    }
    let rank = (0..3).filter(|&i| !tr.form.square_coeff(i).is_zero()).count();
    let tag = match rank {
        3 => FieldFormTag::DiagRank3,
        2 => FieldFormTag::DiagRank2,
        _ => FieldFormTag::DiagRank1,
    };
    (tr, tag)
}

fn no_root(what: &str, f: &Field) -> Error {
    Error::NoResidueRoot(format!("{what} over {}", f.name()))
}

fn normal_form_char2(q: &TernaryForm<Scalar>) -> Result<(Tracker<Scalar>, FieldFormTag)> {
    let f = q.a.field.clone();
    let one = Scalar::one(&f);
    let mut tr = Tracker::new(q);
    if q.alpha.is_zero() && q.beta.is_zero() && q.gamma.is_zero() {
        // A square of a linear form.
        let i = (0..3).find(|&i| !q.square_coeff(i).is_zero()).expect("nonzero form");
        if i != 0 {
            tr.apply(ElementaryMove::swap(Axis::X, Axis::from_index(i)));
        }
        for j in 1..3 {
            let r = tr.form.square_coeff(j).clone() * tr.form.a.inverse().unwrap();
            if !r.is_zero() {
                let mu = r.sqrt().expect("finite fields of characteristic 2 are perfect");
                tr.apply(ElementaryMove::shear(Axis::X, Axis::from_index(j), mu));
            }
        }
        let u = tr.form.a.inverse().unwrap();
        tr.multiply(&u);
        return Ok((tr, FieldFormTag::DoubleLineX2));
    }
    if tr.form.alpha.is_zero() {
        let other = if !tr.form.beta.is_zero() { Axis::Y } else { Axis::Z };
        tr.apply(ElementaryMove::swap(Axis::X, other));
    }
    let ai = tr.form.alpha.inverse().unwrap();
    tr.apply(ElementaryMove::scale(Axis::Y, ai));
    let beta = tr.form.beta.clone();
    if !beta.is_zero() {
        tr.apply(ElementaryMove::shear(Axis::Y, Axis::X, -beta));
    }
    let gamma = tr.form.gamma.clone();
    if !gamma.is_zero() {
        tr.apply(ElementaryMove::shear(Axis::Z, Axis::X, -gamma));
    }
    // Now a x^2 + b y^2 + c z^2 + yz.
    if !(tr.form.b.is_zero() && tr.form.c.is_zero()) {
        if tr.form.b.is_zero() {
            tr.apply(ElementaryMove::swap(Axis::Y, Axis::Z));
        }
        let (b, c) = (tr.form.b.clone(), tr.form.c.clone());
        let d = crate::exactalg::solve_quadratic_char2(&b, &one, &c)?
            .ok_or_else(|| no_root("b Y^2 + Y + c has no root", &f))?;
        let e = d.clone() + b.inverse().unwrap();
        tr.apply_matrix(&split_matrix(&d, &e));
        tr.apply(ElementaryMove::scale(Axis::Z, b.inverse().unwrap()));
    }
    let a = tr.form.a.clone();
    if a.is_zero() {
        return Ok((tr, FieldFormTag::CrossYz));
    }
    tr.apply(ElementaryMove::scale(Axis::Y, a.clone()));
    tr.multiply(&a.inverse().unwrap());
    Ok((tr, FieldFormTag::SmoothX2Yz))
}

/// With `b(Y + d)(Y + e) = bY^2 + Y + c` in characteristic 2, this change
/// of coordinates turns `by^2 + yz + cz^2` into `b·yz`.
pub(crate) fn split_matrix<R: Ring>(d: &R, e: &R) -> Mat3<R> {
    let s = d.clone() + e.clone();
    let si = s.inverse().expect("roots are distinct mod the maximal ideal");
    let (z, o) = (d.zero_like(), d.one_like());
    Mat3::new([
        [o.clone(), z.clone(), z.clone()],
        [z.clone(), e.clone() * si.clone(), d.clone() * si.clone()],
        [z, si.clone(), si],
    ])
}

/// Points of `P^2(F)` in canonical form (first nonzero coordinate 1).
pub fn projective_points(f: &Field) -> impl Iterator<Item = [Elem; 3]> {
    let els: Vec<Elem> = f.elements().collect();
    let (zero, one) = (f.zero(), f.one());
    let mut out = Vec::new();
    for y in &els {
        for z in &els {
            out.push([one.clone(), y.clone(), z.clone()]);
        }
    }
    for z in &els {
        out.push([zero.clone(), one.clone(), z.clone()]);
    }
    out.push([zero.clone(), zero, one]);
    out.into_iter()
}

/// Points of `P^2(F)` where `Q` and all three partials vanish.
pub fn jacobian_points(q: &TernaryForm<Scalar>) -> Vec<[Scalar; 3]> {
    let f = q.a.field.clone();
    projective_points(&f)
        .map(|p| p.map(|e| Scalar::new(&f, e)))
        .filter(|p| q.eval(p).is_zero() && q.gradient(p).iter().all(|g| g.is_zero()))
        .collect()
}

/// Whether `Q = λ ℓ^2` for a linear form `ℓ` over the field of `Q`.
pub fn is_scaled_square(q: &TernaryForm<Scalar>) -> bool {
    let f = q.a.field.clone();
    let target = q.to_array();
    projective_points(&f).any(|l| {
        let l = l.map(|e| Scalar::new(&f, e));
        let two = Scalar::from_i64(&f, 2);
        let sq = [
            l[0].clone() * l[0].clone(),
            l[1].clone() * l[1].clone(),
            l[2].clone() * l[2].clone(),
            two.clone() * l[1].clone() * l[2].clone(),
            two.clone() * l[2].clone() * l[0].clone(),
            two * l[0].clone() * l[1].clone(),
        ];
        proportional(&target, &sq)
    })
}

fn proportional(u: &[Scalar; 6], v: &[Scalar; 6]) -> bool {
    // u = λ v with λ ≠ 0, both nonzero.
    let Some(i) = v.iter().position(|x| !x.is_zero()) else { return false };
    let lambda = u[i].clone() * v[i].inverse().unwrap();
    !lambda.is_zero() && u.iter().zip(v).all(|(x, y)| *x == lambda.clone() * y.clone())
}

/// Largest `q^2` the oracle will enumerate.
pub const ORACLE_LIMIT: u64 = 1 << 20;

/// Geometric classification by enumeration over `F_{q^2}`, independent of
/// δ and σ.
pub fn oracle_classify(q: &TernaryForm<Scalar>) -> Result<FiberType> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let f = &q.a.field;
    let order = f.order().ok_or_else(|| Error::Unsupported("oracle needs a finite field".into()))?;
    if order.checked_mul(order).is_none_or(|qq| qq > ORACLE_LIMIT) {
        return Err(Error::TooLarge(format!("oracle over the square of {}", f.name())));
    }
    let emb = f.extend(2)?;
    let big = q.map(|c| c.embed(&emb));
    Ok(if is_scaled_square(&big) {
        FiberType::NonReduced
    } else if jacobian_points(&big).is_empty() {
        FiberType::Smooth
    } else {
        FiberType::ReducedSingular
    })
}

/// `Q` with coefficients moved into the larger field.
pub fn embed_form(q: &TernaryForm<Scalar>, emb: &Embedding) -> TernaryForm<Scalar> {
    q.map(|c| c.embed(emb))
}

/// Gram rank over a field of characteristic other than 2.
pub fn gram_rank(q: &TernaryForm<Scalar>) -> Result<usize> {
    gram_matrix(q).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(f: &Field, v: [i64; 6]) -> TernaryForm<Scalar> {
        TernaryForm::from_array(v.map(|n| Scalar::from_i64(f, n)))
    }

    fn check(q: &TernaryForm<Scalar>) -> FieldNormalForm {
        let nf = field_normal_form(q).unwrap();
        assert_eq!(q.act_unchecked(&nf.transform).scale(&nf.unit), nf.canonical);
        assert!(nf.transform.is_invertible());
        nf
    }

    #[test]
    fn classification_examples() {
        let f2 = Field::prime(2).unwrap();
        let q = Field::rationals();
        assert_eq!(classify_fiber(&form(&f2, [1, 0, 0, 1, 0, 0])).unwrap(), FiberType::Smooth);
        assert_eq!(classify_fiber(&form(&f2, [1, 0, 0, 0, 0, 0])).unwrap(), FiberType::NonReduced);
        assert_eq!(classify_fiber(&form(&q, [1, 1, 0, 0, 0, 0])).unwrap(), FiberType::ReducedSingular);
        assert_eq!(classify_fiber(&form(&q, [0; 6])), Err(Error::ZeroForm));
    }

    #[test]
    fn oracle_examples() {
        let f3 = Field::prime(3).unwrap();
        let f2 = Field::prime(2).unwrap();
        let yz = form(&f3, [0, 0, 0, 1, 0, 0]);
        assert_eq!(oracle_classify(&yz).unwrap(), FiberType::ReducedSingular);
        assert_eq!(jacobian_points(&yz), vec![[1, 0, 0].map(|n| Scalar::from_i64(&f3, n))]);
        assert_eq!(oracle_classify(&form(&f3, [1, 1, 1, 0, 0, 0])).unwrap(), FiberType::Smooth);
        assert_eq!(oracle_classify(&form(&f2, [1, 1, 0, 0, 0, 0])).unwrap(), FiberType::NonReduced);
    }

    #[test]
    fn normal_form_examples() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::galois(2, 2).unwrap();
        let q = Field::rationals();
        let nf = check(&form(&f2, [0, 0, 0, 0, 0, 1]));
        assert_eq!(nf.tag, FieldFormTag::CrossYz);
        assert_eq!(nf.transform, ElementaryMove::swap(Axis::X, Axis::Z).matrix(&Scalar::one(&f2)));
        assert_eq!(check(&form(&f4, [1, 1, 0, 0, 0, 1])).tag, FieldFormTag::CrossYz);
        assert!(matches!(field_normal_form(&form(&f2, [1, 1, 0, 0, 0, 1])), Err(Error::NoResidueRoot(_))));
        let nf = check(&form(&q, [1, 2, 3, 0, 0, 0]));
        assert_eq!(nf.tag, FieldFormTag::DiagRank3);
        assert_eq!(nf.transform, Mat3::identity(&Scalar::one(&q)));
        assert_eq!(check(&form(&f2, [1, 1, 1, 0, 0, 0])).tag, FieldFormTag::DoubleLineX2);
        assert_eq!(check(&form(&f2, [1, 0, 0, 1, 0, 0])).tag, FieldFormTag::SmoothX2Yz);
        assert_eq!(check(&form(&q, [0, 0, 0, 1, 0, 0])).tag, FieldFormTag::DiagRank2);
    }

    #[test]
    fn every_form_over_f3_and_f4_normalizes() {
        for f in [Field::prime(3).unwrap(), Field::galois(2, 2).unwrap(), Field::prime(5).unwrap()] {
            let n = f.order().unwrap() as usize;
            let els: Vec<Elem> = f.elements().collect();
            for code in 1..n.pow(6).min(20000) {
                let mut c = code;
                let v: [Scalar; 6] = std::array::from_fn(|_| {
                    let e = els[c % n].clone();
                    c /= n;
                    Scalar::new(&f, e)
                });
                let q = TernaryForm::from_array(v);
                let nf = match field_normal_form(&q) {
                    Err(Error::NoResidueRoot(_)) => {
                        // Two conjugate lines; they split over the quadratic extension.
                        let emb = f.extend(2).unwrap();
                        check(&embed_form(&q, &emb))
                    }
                    _ => check(&q),
                };
                let expected = match classify_fiber(&q).unwrap() {
                    FiberType::Smooth => [FieldFormTag::DiagRank3, FieldFormTag::SmoothX2Yz],
                    FiberType::ReducedSingular => [FieldFormTag::DiagRank2, FieldFormTag::CrossYz],
                    FiberType::NonReduced => [FieldFormTag::DiagRank1, FieldFormTag::DoubleLineX2],
                };
                assert!(expected.contains(&nf.tag), "{q}: {:?}", nf.tag);
            }
        }
    }
}
