//! Truncated power series `k[[t]]/(t^N)` and the Hensel-type lifts used by
//! the local normal forms.

use std::fmt;
use std::sync::Arc;

use super::field::{solve_quadratic_char2, Elem, Embedding, Field, Scalar};
use super::ring::{forward_binops, Ring};
use crate::error::{Error, Result};

/// Order of vanishing of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Valuation {
    Finite(usize),
    /// Every stored coefficient vanishes; the true valuation is at least this.
    AtLeastPrecision(usize),
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeastPrecision(_) => None,
        }
    }

    /// Lower bound on the true valuation.
    pub fn lower_bound(self) -> usize {
        match self {
            Valuation::Finite(v) | Valuation::AtLeastPrecision(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeastPrecision(n) => write!(f, "AtLeastPrecision({n})"),
        }
    }
}

/// A power series known modulo `t^precision`.
#[derive(Clone)]
pub struct Series {
    field: Field,
    var: Arc<str>,
    coeffs: Vec<Elem>,
}

impl Series {
    pub fn zero(field: &Field, var: &Arc<str>, precision: usize) -> Series {
        assert!(precision >= 1, "series precision must be positive");
        Series { field: field.clone(), var: var.clone(), coeffs: vec![field.zero(); precision] }
    }

    /// Series from leading coefficients; missing ones are zero, extra ones
    /// are dropped.
    pub fn from_coeffs(field: &Field, var: &Arc<str>, precision: usize, cs: &[Elem]) -> Series {
        let mut s = Series::zero(field, var, precision);
        for (i, c) in cs.iter().take(precision).enumerate() {
            s.coeffs[i] = c.clone();
        }
        s
    }

    /// `c * t^k`.
    pub fn monomial(field: &Field, var: &Arc<str>, precision: usize, c: Elem, k: usize) -> Series {
        let mut s = Series::zero(field, var, precision);
        if k < precision {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn var_name(&self) -> &Arc<str> {
        &self.var
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        Scalar::new(&self.field, self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero()))
    }

    pub fn coeff_elem(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !self.field.is_zero(c)) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::AtLeastPrecision(self.precision()),
        }
    }

    /// Divide by `t^m`; the top `m` coefficients become unknown, so the
    /// precision drops by `m`. Requires valuation at least `m`.
    pub fn shift_down(&self, m: usize) -> Series {
        assert!(m < self.precision(), "shift exceeds precision");
        debug_assert!(self.coeffs[..m].iter().all(|c| self.field.is_zero(c)));
        Series { coeffs: self.coeffs[m..].to_vec(), ..self.clone() }
    }

    /// Multiply by `t^m`, keeping the precision.
    pub fn shift_up(&self, m: usize) -> Series {
        let n = self.precision();
        let mut s = Series::zero(&self.field, &self.var, n);
        for i in m..n {
            s.coeffs[i] = self.coeffs[i - m].clone();
        }
        s
    }

    pub fn truncate(&self, precision: usize) -> Series {
        let mut s = self.clone();
        s.coeffs.truncate(precision.max(1));
        s
    }

    /// Treat the stored truncation as an exact polynomial and view it at a
    /// higher precision (zero padding).
    pub fn padded(&self, precision: usize) -> Series {
        let mut s = self.clone();
        s.coeffs.resize(precision, self.field.zero());
        s
    }

    pub fn scale(&self, c: &Elem) -> Series {
        let f = &self.field;
        Series { coeffs: self.coeffs.iter().map(|x| f.mul(x, c)).collect(), ..self.clone() }
    }

    pub fn embed(&self, emb: &Embedding) -> Series {
        Series {
            field: emb.target.clone(),
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|c| emb.map(c)).collect(),
        }
    }

    /// Split into even and odd parts: `self = e(t^2) + t o(t^2)`, returned
    /// as the series `e`, `o` in `t` (precision halved, rounded up).
    pub fn even_odd(&self) -> (Vec<Elem>, Vec<Elem>) {
        let ev = self.coeffs.iter().step_by(2).cloned().collect();
        let od = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (ev, od)
    }

    fn binop_len(&self, o: &Series) -> usize {
        debug_assert!(self.field == o.field, "series over different fields");
        self.precision().min(o.precision())
    }

    fn add_ref(&self, o: &Series) -> Series {
        let n = self.binop_len(o);
        let f = &self.field;
        let coeffs = (0..n).map(|i| f.add(&self.coeffs[i], &o.coeffs[i])).collect();
        Series { coeffs, ..self.clone() }
    }

    fn sub_ref(&self, o: &Series) -> Series {
        let n = self.binop_len(o);
        let f = &self.field;
        let coeffs = (0..n).map(|i| f.sub(&self.coeffs[i], &o.coeffs[i])).collect();
        Series { coeffs, ..self.clone() }
    }

    fn neg_ref(&self) -> Series {
        let f = &self.field;
        Series { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(), ..self.clone() }
    }

    fn mul_ref(&self, o: &Series) -> Series {
        let n = self.binop_len(o);
        let f = &self.field;
        let p = f.characteristic();
        if p != 0 && f.degree() == 1 {
            // Prime field fast path on raw residues.
            let a: Vec<u64> = self.coeffs[..n].iter().map(raw).collect();
            let b: Vec<u64> = o.coeffs[..n].iter().map(raw).collect();
            let mut out = vec![0u128; n];
            let pp = p as u128;
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b[..n - i].iter().enumerate() {
                    out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
                }
            }
            let coeffs = out.into_iter().map(|v| Elem::Fq(v as u64)).collect();
            return Series { coeffs, ..self.clone() };
        }
        let mut out = vec![f.zero(); n];
        for i in 0..n {
            if f.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..n - i {
                if f.is_zero(&o.coeffs[j]) {
                    continue;
                }
                out[i + j] = f.add(&out[i + j], &f.mul(&self.coeffs[i], &o.coeffs[j]));
            }
        }
        Series { coeffs: out, ..self.clone() }
    }
}

fn raw(e: &Elem) -> u64 {
    match e {
        Elem::Fq(v) => *v,
        Elem::Rat(_) => unreachable!(),
    }
}

forward_binops!(Series);

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.var == other.var && self.coeffs == other.coeffs
    }
}

impl Ring for Series {
    fn field(&self) -> &Field {
        &self.field
    }
    fn zero_like(&self) -> Self {
        Series::zero(&self.field, &self.var, self.precision())
    }
    fn one_like(&self) -> Self {
        Series::monomial(&self.field, &self.var, self.precision(), self.field.one(), 0)
    }
    fn int_like(&self, n: i64) -> Self {
        Series::monomial(&self.field, &self.var, self.precision(), self.field.from_i64(n), 0)
    }
    fn scalar_like(&self, s: &Scalar) -> Self {
        Series::monomial(&self.field, &self.var, self.precision(), s.value.clone(), 0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }
    fn is_one(&self) -> bool {
        self.field.is_one(&self.coeffs[0]) && self.coeffs[1..].iter().all(|c| self.field.is_zero(c))
    }
    fn is_unit(&self) -> bool {
        !self.field.is_zero(&self.coeffs[0])
    }
    fn inverse(&self) -> Option<Self> {
        series_invert(self).ok()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Elem)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => self.var.to_string(),
                    _ => format!("{}^{}", self.var, i),
                };
                (mono, c.clone())
            })
            .collect();
        f.write_str(&super::poly::write_terms(&self.field, &terms))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[[{}]]:{} + O({}^{})", self.field.name(), self.var, self, self.var, self.precision())
    }
}

pub fn series_valuation(f: &Series) -> Valuation {
    f.valuation()
}

/// `v` with `u v = 1 mod t^N`.
pub fn series_invert(u: &Series) -> Result<Series> {
    let f = &u.field;
    let inv0 = f.inv(&u.coeffs[0]).ok_or(Error::NotAUnit)?;
    let n = u.precision();
    let mut v = vec![f.zero(); n];
    v[0] = inv0.clone();
    for k in 1..n {
        let mut acc = f.zero();
        for i in 1..=k {
            if !f.is_zero(&u.coeffs[i]) {
                acc = f.add(&acc, &f.mul(&u.coeffs[i], &v[k - i]));
            }
        }
        v[k] = f.neg(&f.mul(&acc, &inv0));
    }
    Ok(Series { coeffs: v, ..u.clone() })
}

/// Square root of a unit series in odd or zero characteristic, with constant
/// term the canonical square root of `u(0)`.
pub fn hensel_sqrt(u: &Series) -> Result<Series> {
    let f = &u.field;
    if f.characteristic() == 2 {
        return Err(Error::Unsupported("square roots of series in characteristic 2".into()));
    }
    if f.is_zero(&u.coeffs[0]) {
        return Err(Error::NotAUnit);
    }
    let s0 = f
        .sqrt(&u.coeffs[0])
        .ok_or_else(|| Error::NoResidueRoot(format!("{} is not a square in {}", f.format(&u.coeffs[0]), f.name())))?;
    let two_s0_inv = f.inv(&f.mul(&f.from_i64(2), &s0)).expect("2 s0 is a unit");
    let n = u.precision();
    let mut s = vec![f.zero(); n];
    s[0] = s0;
    for k in 1..n {
        let mut acc = u.coeffs[k].clone();
        for i in 1..k {
            acc = f.sub(&acc, &f.mul(&s[i], &s[k - i]));
        }
        s[k] = f.mul(&acc, &two_s0_inv);
    }
    Ok(Series { coeffs: s, ..u.clone() })
}

/// Factor `bY^2 + Y + c = b (Y + d)(Y + e)` over `F_{2^k}[[t]]`, `b` a unit.
/// Returns `(d, e)` ordered by constant term.
pub fn hensel_factor_quadratic(b: &Series, c: &Series) -> Result<(Series, Series)> {
    let f = &b.field;
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    if !b.is_unit() {
        return Err(Error::NotAUnit);
    }
    let n = b.precision().min(c.precision());
    let (b, c) = (b.truncate(n), c.truncate(n));
    let b0 = b.constant_term();
    let one = Scalar::one(f);
    let r = solve_quadratic_char2(&b0, &one, &c.constant_term())?.ok_or_else(|| {
        Error::NoResidueRoot(format!("{b0}*Y^2 + Y + {} has no root in {}", c.constant_term(), f.name()))
    })?;
    let r2 = r.clone() + b0.inverse().unwrap();
    let lift = |r0: &Scalar| -> Series {
        // Newton: the Y-derivative of bY^2 + Y + c is 1 in characteristic 2.
        let mut y = b.scalar_like(r0);
        for _ in 0..=(usize::BITS - n.leading_zeros()) + 1 {
            let fy = b.clone() * y.clone() * y.clone() + y.clone() + c.clone();
            if fy.is_zero() {
                break;
            }
            y = y + fy;
        }
        y
    };
    let (d, e) = (lift(&r), lift(&r2));
    Ok(if d.constant_term() <= e.constant_term() { (d, e) } else { (e, d) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn t_var() -> Arc<str> {
        Arc::from("t")
    }

    fn ser(f: &Field, n: usize, cs: &[i64]) -> Series {
        let cs: Vec<Elem> = cs.iter().map(|&c| f.from_i64(c)).collect();
        Series::from_coeffs(f, &t_var(), n, &cs)
    }

    fn rat(q: &Field, a: i64, b: i64) -> Elem {
        q.from_ratio(&BigInt::from(a), &BigInt::from(b)).unwrap()
    }

    #[test]
    fn inversion() {
        let q = Field::rationals();
        let u = ser(&q, 4, &[1, 1]);
        assert_eq!(series_invert(&u).unwrap(), ser(&q, 4, &[1, -1, 1, -1]));
        let f2 = Field::prime(2).unwrap();
        let u = ser(&f2, 4, &[1, 1]);
        assert_eq!(series_invert(&u).unwrap(), ser(&f2, 4, &[1, 1, 1, 1]));
        assert_eq!(series_invert(&ser(&q, 4, &[1])).unwrap(), ser(&q, 4, &[1]));
        assert_eq!(series_invert(&ser(&q, 4, &[0, 1])), Err(Error::NotAUnit));
    }

    #[test]
    fn square_roots() {
        let q = Field::rationals();
        let s = hensel_sqrt(&ser(&q, 4, &[1, 1])).unwrap();
        let expect = Series::from_coeffs(
            &q,
            &t_var(),
            4,
            &[q.one(), rat(&q, 1, 2), rat(&q, -1, 8), rat(&q, 1, 16)],
        );
        assert_eq!(s, expect);
        let s = hensel_sqrt(&ser(&q, 2, &[4, 1])).unwrap();
        assert_eq!(s, Series::from_coeffs(&q, &t_var(), 2, &[q.from_i64(2), rat(&q, 1, 4)]));
        assert_eq!(hensel_sqrt(&ser(&q, 4, &[1])).unwrap(), ser(&q, 4, &[1]));
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(hensel_sqrt(&ser(&f5, 4, &[2, 1])), Err(Error::NoResidueRoot(_))));
    }

    #[test]
    fn char2_factorisation() {
        let f2 = Field::prime(2).unwrap();
        let (d, e) = hensel_factor_quadratic(&ser(&f2, 8, &[1]), &ser(&f2, 8, &[0])).unwrap();
        assert_eq!((d, e), (ser(&f2, 8, &[0]), ser(&f2, 8, &[1])));
        let (d, e) = hensel_factor_quadratic(&ser(&f2, 8, &[1]), &ser(&f2, 8, &[0, 1])).unwrap();
        assert_eq!(d, ser(&f2, 8, &[0, 1, 1, 0, 1]));
        assert_eq!(e, ser(&f2, 8, &[1, 1, 1, 0, 1]));
        let r = hensel_factor_quadratic(&ser(&f2, 8, &[1]), &ser(&f2, 8, &[1]));
        assert!(matches!(r, Err(Error::NoResidueRoot(_))));
    }

    #[test]
    fn valuations() {
        let q = Field::rationals();
        assert_eq!(ser(&q, 8, &[0, 0, 0, 1, 0, 1]).valuation(), Valuation::Finite(3));
        assert_eq!(ser(&q, 8, &[]).valuation(), Valuation::AtLeastPrecision(8));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(ser(&f2, 8, &[0, 2]).valuation(), Valuation::AtLeastPrecision(8));
    }

    #[test]
    fn precision_is_the_minimum() {
        let q = Field::rationals();
        let a = ser(&q, 8, &[1, 2]);
        let b = ser(&q, 5, &[3]);
        assert_eq!((a.clone() * b.clone()).precision(), 5);
        assert_eq!((a + b).precision(), 5);
    }

    #[test]
    fn printing() {
        let q = Field::rationals();
        let s = hensel_sqrt(&ser(&q, 4, &[1, 1])).unwrap();
        assert_eq!(s.to_string(), "1 + 1/2*t - 1/8*t^2 + 1/16*t^3");
    }
}
