//! Scalar fields: the rationals and finite fields F_{p^k}.
//!
//! Finite field elements are packed into a `u64` as the base-p digits of
//! their coefficient vector over the prime field, lowest degree first. The
//! integer order on this encoding is the canonical order used for
//! tie-breaking everywhere in the crate.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest field order for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 16;
/// Largest target field searched exhaustively for an embedding.
const EMBED_SEARCH_LIMIT: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    /// 0 for the rationals, otherwise a prime.
    pub characteristic: u64,
    pub degree: u32,
    /// Monic modulus over the prime field, coefficients low to high.
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0, degree: 1, modulus: None }
    }

    pub fn prime(p: u64) -> Self {
        FieldSpec { characteristic: p, degree: 1, modulus: None }
    }
}

/// A field element without its field. Only meaningful next to a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Fq(u64),
}

struct Tables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

struct FieldData {
    spec: FieldSpec,
    order: u64,
    gen_name: String,
    tables: Option<Tables>,
}

/// Shared handle to a field. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Irreducible moduli shipped for the small extension fields.
pub fn shipped_modulus(p: u64, k: u32) -> Option<Vec<u64>> {
    match (p, k) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (5, 2) => Some(vec![2, 4, 1]),
        _ => None,
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field::new(FieldSpec::rationals()).expect("the rationals are a field")
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(FieldSpec::prime(p))
    }

    /// F_{p^k} with the shipped modulus, or the smallest irreducible one.
    pub fn galois(p: u64, k: u32) -> Result<Field> {
        if k == 1 {
            return Field::prime(p);
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let modulus = match shipped_modulus(p, k) {
            Some(m) => m,
            None => smallest_irreducible(p, k)?,
        };
        Field::new(FieldSpec { characteristic: p, degree: k, modulus: Some(modulus) })
    }

    pub fn new(spec: FieldSpec) -> Result<Field> {
        Field::with_generator(spec, "g")
    }

    /// Build a field, naming the generator of F_{p^k} over F_p `gen_name`
    /// for parsing and printing.
    pub fn with_generator(spec: FieldSpec, gen_name: &str) -> Result<Field> {
        let p = spec.characteristic;
        if spec.degree == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let order = if p == 0 {
            if spec.degree != 1 || spec.modulus.is_some() {
                return Err(Error::InvalidField(
                    "characteristic 0 only supports the rationals".into(),
                ));
            }
            0
        } else {
            if !is_prime(p) {
                return Err(Error::InvalidField(format!("{p} is not prime")));
            }
            let k = spec.degree;
            let order = (p as u128).checked_pow(k).filter(|&q| q < (1u128 << 62));
            let order = order
                .ok_or_else(|| Error::InvalidField(format!("{p}^{k} is too large")))?
                as u64;
            match (&spec.modulus, k) {
                (None, 1) => {}
                (None, _) => {
                    return Err(Error::InvalidField(format!(
                        "extension degree {k} needs a modulus"
                    )))
                }
                (Some(m), _) => {
                    if m.len() != k as usize + 1 || *m.last().unwrap() != 1 {
                        return Err(Error::InvalidField(format!(
                            "modulus must be monic of degree {k}"
                        )));
                    }
                    if m.iter().any(|&c| c >= p) {
                        return Err(Error::InvalidField(
                            "modulus coefficients must be reduced mod p".into(),
                        ));
                    }
                    if !fp_poly::is_irreducible(m, p) {
                        return Err(Error::InvalidField("modulus is reducible".into()));
                    }
                }
            }
            order
        };
        let mut data = FieldData { spec, order, gen_name: gen_name.to_string(), tables: None };
        if p != 0 && data.spec.degree > 1 && order <= TABLE_LIMIT {
            data.tables = Some(build_tables(&data));
        }
        Ok(Field(Arc::new(data)))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.0.spec.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.degree
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        (self.0.order != 0).then_some(self.0.order)
    }

    pub fn is_finite(&self) -> bool {
        self.0.order != 0
    }

    pub fn generator_name(&self) -> &str {
        &self.0.gen_name
    }

    pub fn name(&self) -> String {
        match (self.characteristic(), self.degree()) {
            (0, _) => "Q".to_string(),
            (p, 1) => format!("F{p}"),
            (p, k) => format!("F{}", (p as u128).pow(k)),
        }
    }

    pub fn zero(&self) -> Elem {
        if self.is_finite() {
            Elem::Fq(0)
        } else {
            Elem::Rat(BigRational::zero())
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        let p = self.characteristic();
        if p == 0 {
            Elem::Rat(BigRational::from_integer(n.clone()))
        } else {
            let r = n.mod_floor_u64(p);
            Elem::Fq(r)
        }
    }

    /// Rational number `num/den`; for finite fields the image of it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Elem> {
        let d = self.from_bigint(den);
        let n = self.from_bigint(num);
        self.inv(&d).map(|di| self.mul(&n, &di))
    }

    /// The class of the polynomial variable in F_p[g]/(modulus).
    pub fn generator(&self) -> Elem {
        if self.degree() > 1 {
            Elem::Fq(self.characteristic())
        } else {
            self.zero()
        }
    }

    /// All elements in canonical order. Panics on the rationals.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        let q = self.order().expect("finite field");
        (0..q).map(Elem::Fq)
    }

    fn digits(&self, mut v: u64) -> Vec<u64> {
        let p = self.characteristic();
        let k = self.degree() as usize;
        let mut out = vec![0; k];
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    }

    fn from_digits(&self, d: &[u64]) -> u64 {
        let p = self.characteristic();
        d.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    /// Coefficients of the element over the prime field, low to high.
    pub fn coordinates(&self, e: &Elem) -> Vec<u64> {
        match e {
            Elem::Fq(v) => self.digits(*v),
            Elem::Rat(_) => panic!("coordinates of a rational"),
        }
    }

    pub fn from_coordinates(&self, d: &[u64]) -> Elem {
        Elem::Fq(self.from_digits(d))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Fq(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_one(),
            Elem::Fq(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Fq(x), Elem::Fq(y)) => {
                let p = self.characteristic();
                if self.degree() == 1 {
                    Elem::Fq(((*x as u128 + *y as u128) % p as u128) as u64)
                } else if p == 2 {
                    Elem::Fq(x ^ y)
                } else {
                    let (dx, dy) = (self.digits(*x), self.digits(*y));
                    let s: Vec<u64> = dx.iter().zip(&dy).map(|(u, v)| (u + v) % p).collect();
                    Elem::Fq(self.from_digits(&s))
                }
            }
            _ => panic!("mixed rational and finite field elements"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Rat(x) => Elem::Rat(-x),
            Elem::Fq(x) => {
                let p = self.characteristic();
                if p == 2 {
                    Elem::Fq(*x)
                } else if self.degree() == 1 {
                    Elem::Fq((p - x) % p)
                } else {
                    let d: Vec<u64> = self.digits(*x).iter().map(|c| (p - c) % p).collect();
                    Elem::Fq(self.from_digits(&d))
                }
            }
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Fq(x), Elem::Fq(y)) => {
                if *x == 0 || *y == 0 {
                    return Elem::Fq(0);
                }
                let p = self.characteristic();
                if self.degree() == 1 {
                    return Elem::Fq(((*x as u128 * *y as u128) % p as u128) as u64);
                }
                if let Some(t) = &self.0.tables {
                    let q1 = (self.0.order - 1) as usize;
                    let i = t.log[*x as usize] as usize + t.log[*y as usize] as usize;
                    return Elem::Fq(t.exp[i % q1]);
                }
                Elem::Fq(self.mul_slow(*x, *y))
            }
            _ => panic!("mixed rational and finite field elements"),
        }
    }

    fn mul_slow(&self, x: u64, y: u64) -> u64 {
        let p = self.characteristic();
        let m = self.0.spec.modulus.as_ref().expect("extension field has a modulus");
        let prod = fp_poly::mul(&self.digits(x), &self.digits(y), p);
        let r = fp_poly::rem(&prod, m, p);
        let mut d = r;
        d.resize(self.degree() as usize, 0);
        self.from_digits(&d)
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        match a {
            Elem::Rat(x) => Some(Elem::Rat(x.recip())),
            Elem::Fq(x) => {
                if let Some(t) = &self.0.tables {
                    let q1 = (self.0.order - 1) as usize;
                    let l = t.log[*x as usize] as usize;
                    return Some(Elem::Fq(t.exp[(q1 - l) % q1]));
                }
                Some(self.pow(a, self.0.order - 2))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// A square root if one exists. Finite fields return the root with the
    /// smaller encoding; the rationals return the nonnegative root.
    pub fn sqrt(&self, a: &Elem) -> Option<Elem> {
        match a {
            Elem::Rat(r) => {
                if r.is_negative() {
                    return None;
                }
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                (&sn * &sn == *n && &sd * &sd == *d)
                    .then(|| Elem::Rat(BigRational::new(sn, sd)))
            }
            Elem::Fq(0) => Some(Elem::Fq(0)),
            Elem::Fq(_) => {
                let q = self.0.order;
                if self.characteristic() == 2 {
                    return Some(self.pow(a, q / 2));
                }
                if !self.is_one(&self.pow(a, (q - 1) / 2)) {
                    return None;
                }
                let r = self.tonelli_shanks(a);
                let nr = self.neg(&r);
                Some(if nr < r { nr } else { r })
            }
        }
    }

    fn tonelli_shanks(&self, a: &Elem) -> Elem {
        let q = self.0.order;
        let mut s = 0;
        let mut m = q - 1;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(1)
            .find(|z| !self.is_one(&self.pow(z, (q - 1) / 2)))
            .expect("odd finite field has a non-residue");
        let mut c = self.pow(&z, m);
        let mut t = self.pow(a, m);
        let mut r = self.pow(a, m.div_ceil(2));
        let mut s = s;
        while !self.is_one(&t) {
            let mut i = 0;
            let mut t2 = t.clone();
            while !self.is_one(&t2) {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(s - i - 1) {
                b = self.mul(&b, &b);
            }
            r = self.mul(&r, &b);
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            s = i;
        }
        r
    }

    /// The unique p-th root in a finite field; `None` in characteristic 0.
    pub fn pth_root(&self, a: &Elem) -> Option<Elem> {
        let p = self.characteristic();
        if p == 0 {
            return None;
        }
        // Frobenius has order k, so its inverse is Frobenius^(k-1).
        let mut r = a.clone();
        for _ in 1..self.degree() {
            r = self.pow(&r, p);
        }
        Some(r)
    }

    /// Roots of `w^2 + w = d` in characteristic 2, smaller root first.
    pub fn artin_schreier(&self, d: &Elem) -> Option<(Elem, Elem)> {
        assert_eq!(self.characteristic(), 2);
        let k = self.degree() as usize;
        // w -> w^2 + w is F2-linear; solve the k x k system column by column.
        let cols: Vec<u64> = (0..k)
            .map(|i| {
                let e = Elem::Fq(1 << i);
                match self.add(&self.mul(&e, &e), &e) {
                    Elem::Fq(v) => v,
                    _ => unreachable!(),
                }
            })
            .collect();
        let target = match d {
            Elem::Fq(v) => *v,
            _ => unreachable!(),
        };
        let w = solve_gf2(&cols, target, k)?;
        let w1 = Elem::Fq(w);
        let w2 = self.add(&w1, &self.one());
        Some(if w1 < w2 { (w1, w2) } else { (w2, w1) })
    }

    pub fn format(&self, a: &Elem) -> String {
        match a {
            Elem::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Elem::Fq(v) => {
                if self.degree() == 1 {
                    return v.to_string();
                }
                let d = self.digits(*v);
                let g = &self.0.gen_name;
                let mut terms = Vec::new();
                for (i, &c) in d.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => g.clone(),
                        _ => format!("{g}^{i}"),
                    };
                    terms.push(match (c, mono.is_empty()) {
                        (_, true) => c.to_string(),
                        (1, false) => mono,
                        (_, false) => format!("{c}*{mono}"),
                    });
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }

    /// True when the printed form is a sum and needs parentheses as a factor.
    pub fn is_compound(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(_) => false,
            Elem::Fq(v) => self.degree() > 1 && self.digits(*v).iter().filter(|&&c| c != 0).count() > 1,
        }
    }

    /// A field of `d` times the degree, with the embedding of `self` into it.
    pub fn extend(&self, d: u32) -> Result<Embedding> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::Unsupported("extensions of the rationals".into()));
        }
        let k = self.degree() * d;
        let big = Field::galois(p, k)?;
        let big = Field::with_generator(big.spec().clone(), &self.0.gen_name)?;
        Embedding::new(self.clone(), big)
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}
impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let r = ((self % &pb) + &pb) % &pb;
        r.try_into().expect("residue fits in u64")
    }
}

/// Solve `sum_i x_i cols[i] = target` over F2; smallest solution.
fn solve_gf2(cols: &[u64], target: u64, k: usize) -> Option<u64> {
    // Rows: bit j of each column. Build augmented rows as (coeff mask, rhs).
    let mut rows: Vec<(u64, u64)> = (0..k)
        .map(|j| {
            let mask = cols.iter().enumerate().fold(0u64, |m, (i, c)| m | (((c >> j) & 1) << i));
            (mask, (target >> j) & 1)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    // Eliminate on high variables first so free variables are the low ones.
    for col in (0..k).rev() {
        let Some(pr) = (r..rows.len()).find(|&i| (rows[i].0 >> col) & 1 == 1) else { continue };
        rows.swap(r, pr);
        for i in 0..rows.len() {
            if i != r && (rows[i].0 >> col) & 1 == 1 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1 == 1) {
        return None;
    }
    // Free variables set to zero.
    let mut x = 0u64;
    for (i, &col) in pivots.iter().enumerate() {
        x |= rows[i].1 << col;
    }
    Some(x)
}

fn build_tables(data: &FieldData) -> Tables {
    let tmp = Field(Arc::new(FieldData {
        spec: data.spec.clone(),
        order: data.order,
        gen_name: data.gen_name.clone(),
        tables: None,
    }));
    let q = data.order;
    let factors = prime_factors(q - 1);
    let g = (2..q)
        .map(Elem::Fq)
        .find(|g| factors.iter().all(|&r| !tmp.is_one(&tmp.pow(g, (q - 1) / r))))
        .expect("multiplicative group is cyclic");
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    let gv = match g {
        Elem::Fq(v) => v,
        _ => unreachable!(),
    };
    for i in 0..(q - 1) {
        exp.push(x);
        log[x as usize] = i as u32;
        x = tmp.mul_slow(x, gv);
    }
    Tables { exp, log }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn smallest_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
    let count = (p as u128).pow(k);
    for code in 0..count {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u128) as u64);
            c /= p as u128;
        }
        m.push(1);
        if m[0] != 0 && fp_poly::is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {k} over F{p}")))
}

/// An embedding of a finite field into an extension, fixed by the image of
/// the generator (the smallest root of the small field's modulus).
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    gen_image: Elem,
}

impl Embedding {
    pub fn new(source: Field, target: Field) -> Result<Embedding> {
        let (p, k) = (source.characteristic(), source.degree());
        if p == 0 || p != target.characteristic() || !target.degree().is_multiple_of(k) {
            return Err(Error::InvalidField(format!(
                "{} does not embed in {}",
                source.name(),
                target.name()
            )));
        }
        let gen_image = if k == 1 {
            target.zero()
        } else {
            let q = target.order().unwrap();
            if q > EMBED_SEARCH_LIMIT {
                return Err(Error::TooLarge(format!("root search in {}", target.name())));
            }
            let m = source.spec().modulus.clone().unwrap();
            target
                .elements()
                .find(|x| {
                    let mut acc = target.zero();
                    for &c in m.iter().rev() {
                        acc = target.add(&target.mul(&acc, x), &target.from_i64(c as i64));
                    }
                    target.is_zero(&acc)
                })
                .ok_or_else(|| Error::InvalidField("modulus has no root in target".into()))?
        };
        Ok(Embedding { source, target, gen_image })
    }

    pub fn identity(field: &Field) -> Embedding {
        Embedding { source: field.clone(), target: field.clone(), gen_image: field.generator() }
    }

    pub fn map(&self, e: &Elem) -> Elem {
        if self.source == self.target {
            return e.clone();
        }
        let t = &self.target;
        let d = self.source.coordinates(e);
        let mut acc = t.zero();
        for &c in d.iter().rev() {
            acc = t.add(&t.mul(&acc, &self.gen_image), &t.from_i64(c as i64));
        }
        acc
    }
}

/// Dense polynomials over F_p as coefficient vectors, low degree first.
pub(crate) mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u128;
        let mut b = a as u128;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        r as u64
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u128 * lead_inv as u128 % p as u128) as u64;
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = ((r[idx] as u128 + (p - c) as u128 * mj as u128) % p as u128) as u64;
                }
            }
            r = trim(r);
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// x^(p^i) mod m for i = 0..=k.
    fn frobenius_orbit(m: &[u64], p: u64, k: usize) -> Vec<Vec<u64>> {
        let mut out = vec![rem(&[0, 1], m, p)];
        for _ in 0..k {
            let last = out.last().unwrap().clone();
            out.push(powmod(&last, p, m, p));
        }
        out
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let m = trim(m.to_vec());
        let k = m.len() - 1;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let orbit = frobenius_orbit(&m, p, k);
        let x = rem(&[0, 1], &m, p);
        if sub(&orbit[k], &x, p) != Vec::<u64>::new() {
            return false;
        }
        let mut n = k;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                primes.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        primes.iter().all(|&r| {
            let h = sub(&orbit[k / r], &x, p);
            gcd(&h, &m, p).len() == 1
        })
    }
}

/// A field element together with its field.
#[derive(Clone)]
pub struct Scalar {
    pub field: Field,
    pub value: Elem,
}

impl Scalar {
    pub fn new(field: &Field, value: Elem) -> Scalar {
        Scalar { field: field.clone(), value }
    }

    pub fn from_i64(field: &Field, n: i64) -> Scalar {
        Scalar::new(field, field.from_i64(n))
    }

    pub fn zero(field: &Field) -> Scalar {
        Scalar::new(field, field.zero())
    }

    pub fn one(field: &Field) -> Scalar {
        Scalar::new(field, field.one())
    }

    pub fn sqrt(&self) -> Option<Scalar> {
        self.field.sqrt(&self.value).map(|v| Scalar::new(&self.field, v))
    }

    pub fn pth_root(&self) -> Option<Scalar> {
        self.field.pth_root(&self.value).map(|v| Scalar::new(&self.field, v))
    }

    pub fn embed(&self, e: &Embedding) -> Scalar {
        Scalar::new(&e.target, e.map(&self.value))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}
impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.field.name(), self)
    }
}

/// `field_sqrt` from the library surface: a square root when one exists.
pub fn field_sqrt(a: &Scalar) -> Option<Scalar> {
    a.sqrt()
}

/// A root of `a mu^2 + b mu + c` in characteristic 2, the smaller one when
/// there are two. `None` when the quadratic has no root in the field.
pub fn solve_quadratic_char2(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Option<Scalar>> {
    let f = &a.field;
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    if f.is_zero(&a.value) {
        return Err(Error::Inconsistent("leading coefficient is zero".into()));
    }
    if f.is_zero(&b.value) {
        let r = f.div(&c.value, &a.value).unwrap();
        return Ok(f.sqrt(&r).map(|v| Scalar::new(f, v)));
    }
    // mu = (b/a) w turns the equation into w^2 + w = ac/b^2.
    let ba = f.div(&b.value, &a.value).unwrap();
    let d = f.div(&f.mul(&a.value, &c.value), &f.mul(&b.value, &b.value)).unwrap();
    Ok(f.artin_schreier(&d).map(|(w1, w2)| {
        let m1 = f.mul(&ba, &w1);
        let m2 = f.mul(&ba, &w2);
        Scalar::new(f, if m1 < m2 { m1 } else { m2 })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(f: &Field, n: i64) -> Scalar {
        Scalar::from_i64(f, n)
    }

    #[test]
    fn shipped_moduli_are_irreducible() {
        for (p, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
            let m = shipped_modulus(p, k).unwrap();
            assert!(fp_poly::is_irreducible(&m, p), "F{p}^{k}");
        }
        assert!(!fp_poly::is_irreducible(&[1, 0, 1], 2));
        assert!(!fp_poly::is_irreducible(&[1, 0, 1], 5));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Field::prime(4).is_err());
        let reducible = FieldSpec { characteristic: 2, degree: 2, modulus: Some(vec![1, 0, 1]) };
        assert!(Field::new(reducible).is_err());
        let no_mod = FieldSpec { characteristic: 3, degree: 2, modulus: None };
        assert!(Field::new(no_mod).is_err());
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let f = Field::galois(3, 2).unwrap();
        for x in 0..9 {
            for y in 0..9 {
                let fast = f.mul(&Elem::Fq(x), &Elem::Fq(y));
                let slow = if x == 0 || y == 0 { 0 } else { f.mul_slow(x, y) };
                assert_eq!(fast, Elem::Fq(slow));
            }
        }
    }

    #[test]
    fn square_roots() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(s(&f3, 1).sqrt(), Some(s(&f3, 1)));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(s(&f7, 2).sqrt(), Some(s(&f7, 3)));
        assert_eq!(s(&f7, 3).sqrt(), None);
        let q = Field::rationals();
        let r = f64_free_rat(&q, 4, 9);
        assert_eq!(r.sqrt(), Some(f64_free_rat(&q, 2, 3)));
        assert_eq!(s(&q, 2).sqrt(), None);
        // Exhaustive: in every small field, sqrt(a)^2 = a whenever defined,
        // and char-2 square roots are total.
        for f in [Field::galois(2, 3).unwrap(), Field::galois(5, 2).unwrap(), Field::prime(13).unwrap()] {
            let mut squares = std::collections::BTreeSet::new();
            for a in f.elements() {
                squares.insert(f.mul(&a, &a));
            }
            for a in f.elements() {
                match f.sqrt(&a) {
                    Some(r) => assert_eq!(f.mul(&r, &r), a),
                    None => assert!(!squares.contains(&a)),
                }
            }
        }
    }

    fn f64_free_rat(q: &Field, n: i64, d: i64) -> Scalar {
        Scalar::new(q, q.from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap())
    }

    #[test]
    fn char2_quadratics() {
        let f2 = Field::prime(2).unwrap();
        let (o, z) = (s(&f2, 1), s(&f2, 0));
        assert_eq!(solve_quadratic_char2(&o, &z, &o).unwrap(), Some(o.clone()));
        assert_eq!(solve_quadratic_char2(&o, &o, &z).unwrap(), Some(z.clone()));
        assert_eq!(solve_quadratic_char2(&o, &o, &o).unwrap(), None);
        let f4 = Field::galois(2, 2).unwrap();
        let o4 = s(&f4, 1);
        let w = solve_quadratic_char2(&o4, &o4, &o4).unwrap().unwrap();
        let v = f4.add(&f4.add(&f4.mul(&w.value, &w.value), &w.value), &f4.one());
        assert!(f4.is_zero(&v));
        assert_eq!(w.value, f4.generator());
    }

    #[test]
    fn char2_quadratics_match_exhaustive_search() {
        let f = Field::galois(2, 3).unwrap();
        for a in f.elements().skip(1) {
            for b in f.elements() {
                for c in f.elements() {
                    let roots: Vec<Elem> = f
                        .elements()
                        .filter(|m| {
                            let v = f.add(&f.add(&f.mul(&a, &f.mul(m, m)), &f.mul(&b, m)), &c);
                            f.is_zero(&v)
                        })
                        .collect();
                    let got = solve_quadratic_char2(
                        &Scalar::new(&f, a.clone()),
                        &Scalar::new(&f, b.clone()),
                        &Scalar::new(&f, c.clone()),
                    )
                    .unwrap();
                    assert_eq!(got.map(|g| g.value), roots.first().cloned());
                }
            }
        }
    }

    #[test]
    fn embeddings_are_ring_maps() {
        let f4 = Field::galois(2, 2).unwrap();
        let e = f4.extend(2).unwrap();
        assert_eq!(e.target.order(), Some(16));
        for a in f4.elements() {
            for b in f4.elements() {
                let lhs = e.map(&f4.mul(&a, &b));
                let rhs = e.target.mul(&e.map(&a), &e.map(&b));
                assert_eq!(lhs, rhs);
                assert_eq!(e.map(&f4.add(&a, &b)), e.target.add(&e.map(&a), &e.map(&b)));
            }
        }
        let f5 = Field::prime(5).unwrap();
        let e = f5.extend(2).unwrap();
        let two = e.map(&f5.from_i64(2));
        assert!(e.target.sqrt(&two).is_some());
    }

    #[test]
    fn pth_roots_invert_frobenius() {
        let f = Field::galois(3, 3).unwrap();
        for a in f.elements() {
            let r = f.pth_root(&a).unwrap();
            assert_eq!(f.pow(&r, 3), a);
        }
    }

    #[test]
    fn large_fields_without_tables() {
        let f = Field::galois(2, 20).unwrap();
        let x = f.generator();
        let xi = f.inv(&x).unwrap();
        assert!(f.is_one(&f.mul(&x, &xi)));
        let r = f.sqrt(&x).unwrap();
        assert_eq!(f.mul(&r, &r), x);
    }

    #[test]
    fn printing() {
        let f4 = Field::galois(2, 2).unwrap();
        assert_eq!(f4.format(&Elem::Fq(3)), "g + 1");
        assert_eq!(f4.format(&Elem::Fq(2)), "g");
        let q = Field::rationals();
        assert_eq!(f64_free_rat(&q, -1, 8).to_string(), "-1/8");
    }
}
