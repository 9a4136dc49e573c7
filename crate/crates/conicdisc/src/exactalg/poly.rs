//! Sparse multivariate polynomials over a scalar field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Elem, Embedding, Field, Scalar};
use super::ring::{forward_binops, Ring};

pub type Exponents = Vec<u32>;

#[derive(Clone)]
pub struct Poly {
    field: Field,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exponents, Elem>,
}

impl Poly {
    pub fn zero(field: &Field, vars: &Arc<Vec<String>>) -> Poly {
        Poly { field: field.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, vars: &Arc<Vec<String>>, c: Elem) -> Poly {
        Poly::monomial(field, vars, c, vec![0; vars.len()])
    }

    pub fn monomial(field: &Field, vars: &Arc<Vec<String>>, c: Elem, exps: Exponents) -> Poly {
        assert_eq!(exps.len(), vars.len());
        let mut p = Poly::zero(field, vars);
        if !field.is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(field: &Field, vars: &Arc<Vec<String>>, i: usize) -> Poly {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Poly::monomial(field, vars, field.one(), e)
    }

    pub fn from_terms(
        field: &Field,
        vars: &Arc<Vec<String>>,
        terms: impl IntoIterator<Item = (Exponents, Elem)>,
    ) -> Poly {
        let mut p = Poly::zero(field, vars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: &Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = self.field.add(v, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Elem> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d == 0))
    }

    pub fn constant_term(&self) -> Scalar {
        let z = vec![0; self.vars.len()];
        Scalar::new(&self.field, self.terms.get(&z).cloned().unwrap_or_else(|| self.field.zero()))
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        Scalar::new(&self.field, self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero()))
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        let f = &self.field;
        Poly::from_terms(f, &self.vars, self.terms.iter().map(|(e, v)| (e.clone(), f.mul(v, c))))
    }

    /// Evaluate at a point given by one scalar per variable.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars.len());
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &d) in point.iter().zip(e) {
                if d > 0 {
                    t = f.mul(&t, &f.pow(&x.value, d as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Scalar::new(f, acc)
    }

    /// Substitute polynomials (over the ring of `subs[0]`) for the variables.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.vars.len());
        let proto = &subs[0];
        let mut acc = proto.zero_like();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(&proto.field, &proto.vars, c.clone());
            for (s, &d) in subs.iter().zip(e) {
                if d > 0 {
                    t = t * s.pow(d);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Poly {
        let f = &self.field;
        Poly::from_terms(
            f,
            &self.vars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, f.mul(c, &f.from_i64(e[i] as i64)))
            }),
        )
    }

    /// `g` with `g^p = self` when every exponent is divisible by the
    /// characteristic p; `None` otherwise (and always in characteristic 0).
    pub fn pth_root(&self) -> Option<Poly> {
        let p = self.field.characteristic();
        if p == 0 {
            return None;
        }
        let p32 = u32::try_from(p).ok();
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let p32 = p32?;
            if e.iter().any(|d| d % p32 != 0) {
                return None;
            }
            let e2 = e.iter().map(|d| d / p32).collect();
            out.push((e2, self.field.pth_root(c)?));
        }
        Some(Poly::from_terms(&self.field, &self.vars, out))
    }

    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::from_terms(
            &emb.target,
            &self.vars,
            self.terms.iter().map(|(e, c)| (e.clone(), emb.map(c))),
        )
    }

    /// Same polynomial viewed in a ring with the given variable list; all
    /// variables in use must be present there.
    pub fn reindex(&self, vars: &Arc<Vec<String>>) -> Option<Poly> {
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let used = self.used_vars();
        if used.iter().any(|&i| map[i].is_none()) {
            return None;
        }
        let mut out = Poly::zero(&self.field, vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; vars.len()];
            for (i, &d) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    e2[j] = d;
                }
            }
            out.add_term(e2, c);
        }
        Some(out)
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    fn add_ref(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    fn neg_ref(&self) -> Poly {
        let f = &self.field;
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect(), ..self.clone() }
    }

    fn sub_ref(&self, o: &Poly) -> Poly {
        self.add_ref(&o.neg_ref())
    }

    fn mul_ref(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let mut out = Poly::zero(f, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &f.mul(c1, c2));
            }
        }
        out
    }

    /// Terms in graded-lexicographic order, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }
}

pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

forward_binops!(Poly);

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.terms == other.terms
    }
}

impl Ring for Poly {
    fn field(&self) -> &Field {
        &self.field
    }
    fn zero_like(&self) -> Self {
        Poly::zero(&self.field, &self.vars)
    }
    fn one_like(&self) -> Self {
        Poly::constant(&self.field, &self.vars, self.field.one())
    }
    fn int_like(&self, n: i64) -> Self {
        Poly::constant(&self.field, &self.vars, self.field.from_i64(n))
    }
    fn scalar_like(&self, s: &Scalar) -> Self {
        Poly::constant(&self.field, &self.vars, s.value.clone())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.is_constant() && self.field.is_one(&self.constant_term().value)
    }
    fn is_unit(&self) -> bool {
        !self.is_zero() && self.is_constant()
    }
    fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let c = self.field.inv(&self.constant_term().value)?;
        Some(Poly::constant(&self.field, &self.vars, c))
    }
}

/// Write `coeff * mono` terms joined with signs. Shared by the polynomial
/// and series printers.
pub(crate) fn write_terms(field: &Field, terms: &[(String, Elem)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, c)) in terms.iter().enumerate() {
        let (neg, mag) = match c {
            Elem::Rat(r) if r < &num::BigRational::from_integer(0.into()) => (true, Elem::Rat(-r)),
            _ => (false, c.clone()),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let cs = field.format(&mag);
        if mono.is_empty() {
            out.push_str(&cs);
        } else if field.is_one(&mag) {
            out.push_str(mono);
        } else if field.is_compound(&mag) {
            out.push_str(&format!("({cs})*{mono}"));
        } else {
            out.push_str(&format!("{cs}*{mono}"));
        }
    }
    out
}

pub(crate) fn monomial_string(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &d)| d > 0)
        .map(|(v, &d)| if d == 1 { v.clone() } else { format!("{v}^{d}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Elem)> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| (monomial_string(&self.vars, e), c.clone()))
            .collect();
        f.write_str(&write_terms(&self.field, &terms))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]:{}", self.field.name(), self.vars.join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, names: &[&str]) -> (Field, Arc<Vec<String>>) {
        let f = if p == 0 { Field::rationals() } else { Field::prime(p).unwrap() };
        (f, Arc::new(names.iter().map(|s| s.to_string()).collect()))
    }

    #[test]
    fn printing_is_grlex() {
        let (f, v) = ring(2, &["u", "v"]);
        let u = Poly::var(&f, &v, 0);
        let w = Poly::var(&f, &v, 1);
        let phi = u.clone() * w.clone() * (u.clone() + w.clone());
        assert_eq!(phi.pow(4).to_string(), "u^8*v^4 + u^4*v^8");
        let (q, v) = ring(0, &["t"]);
        let t = Poly::var(&q, &v, 0);
        let p = t.clone() * t.clone() - t.int_like(3) * t.clone() + t.int_like(2);
        assert_eq!(p.to_string(), "t^2 - 3*t + 2");
    }

    #[test]
    fn pth_roots() {
        let (f, v) = ring(2, &["u", "v"]);
        let u = Poly::var(&f, &v, 0);
        let w = Poly::var(&f, &v, 1);
        assert_eq!((u.pow(2) + w.pow(2)).pth_root(), Some(u.clone() + w.clone()));
        assert_eq!((u.pow(4) * w.pow(2)).pth_root(), Some(u.pow(2) * w.clone()));
        assert_eq!(u.pow(3).pth_root(), None);
    }

    #[test]
    fn derivatives_and_evaluation() {
        let (f, v) = ring(5, &["u", "v"]);
        let u = Poly::var(&f, &v, 0);
        let w = Poly::var(&f, &v, 1);
        let p = u.pow(3) * w.clone() + u.int_like(2) * w.clone();
        assert_eq!(p.partial(0), u.int_like(3) * u.pow(2) * w.clone());
        let pt = [Scalar::from_i64(&f, 2), Scalar::from_i64(&f, 3)];
        assert_eq!(p.eval(&pt), Scalar::from_i64(&f, (8 * 3 + 2 * 3) % 5));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let (f, v) = ring(3, &["u"]);
        let u = Poly::var(&f, &v, 0);
        let p = u.int_like(3) * u.clone();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }
}
