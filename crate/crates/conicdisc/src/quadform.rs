//! Ternary quadratic forms `Q = ax^2 + by^2 + cz^2 + αyz + βzx + γxy` over any
//! supported ring, the coordinate-change action, the discriminant δ, the
//! σ and σ′ generators, and the explicit witness δ ∈ σ.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{ElementaryMove, Mat3, Ring, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct TernaryForm<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
}

/// Coefficient names in storage order.
pub const COEFF_NAMES: [&str; 6] = ["a", "b", "c", "alpha", "beta", "gamma"];

fn mul_sparse<R: Ring>(x: &R, y: &R) -> Option<R> {
    if x.is_zero() || y.is_zero() {
        None
    } else if x.is_one() {
        Some(y.clone())
    } else if y.is_one() {
        Some(x.clone())
    } else {
        Some(x.clone() * y.clone())
    }
}

fn accumulate<R: Ring>(acc: &mut Option<R>, term: Option<R>) {
    if let Some(t) = term {
        *acc = Some(match acc.take() {
            Some(a) => a + t,
            None => t,
        });
    }
}

impl<R: Ring> TernaryForm<R> {
    pub fn new(a: R, b: R, c: R, alpha: R, beta: R, gamma: R) -> Self {
        TernaryForm { a, b, c, alpha, beta, gamma }
    }

    pub fn from_array(v: [R; 6]) -> Self {
        let [a, b, c, alpha, beta, gamma] = v;
        TernaryForm { a, b, c, alpha, beta, gamma }
    }

    pub fn coeffs(&self) -> [&R; 6] {
        [&self.a, &self.b, &self.c, &self.alpha, &self.beta, &self.gamma]
    }

    pub fn to_array(&self) -> [R; 6] {
        self.coeffs().map(|c| c.clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TernaryForm<S> {
        TernaryForm::from_array(self.coeffs().map(f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_zero())
    }

    /// `u · Q`.
    pub fn scale(&self, u: &R) -> Self {
        if u.is_one() {
            return self.clone();
        }
        self.map(|c| c.clone() * u.clone())
    }

    /// The coefficient of `x_i^2`.
    pub fn square_coeff(&self, i: usize) -> &R {
        [&self.a, &self.b, &self.c][i]
    }

    /// The coefficient of `x_i x_j` for `i != j`.
    pub fn cross_coeff(&self, i: usize, j: usize) -> &R {
        match (i.min(j), i.max(j)) {
            (1, 2) => &self.alpha,
            (0, 2) => &self.beta,
            (0, 1) => &self.gamma,
            _ => panic!("cross coefficient needs distinct indices"),
        }
    }

    /// `Q(v)`.
    pub fn eval(&self, v: &[R; 3]) -> R {
        let mut acc = None;
        for i in 0..3 {
            let sq = mul_sparse(&v[i], &v[i]);
            accumulate(&mut acc, sq.and_then(|s| mul_sparse(self.square_coeff(i), &s)));
        }
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let p = mul_sparse(&v[i], &v[j]);
            accumulate(&mut acc, p.and_then(|p| mul_sparse(self.cross_coeff(i, j), &p)));
        }
        acc.unwrap_or_else(|| self.a.zero_like())
    }

    /// The polar form `B(u, v) = Q(u + v) - Q(u) - Q(v)`.
    pub fn polar(&self, u: &[R; 3], v: &[R; 3]) -> R {
        let mut acc = None;
        let two = self.a.int_like(2);
        for i in 0..3 {
            let p = mul_sparse(&u[i], &v[i]);
            let c = self.square_coeff(i).clone() * two.clone();
            accumulate(&mut acc, p.and_then(|p| mul_sparse(&c, &p)));
        }
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let mut s = None;
            accumulate(&mut s, mul_sparse(&u[i], &v[j]));
            accumulate(&mut s, mul_sparse(&u[j], &v[i]));
            accumulate(&mut acc, s.and_then(|s| mul_sparse(self.cross_coeff(i, j), &s)));
        }
        acc.unwrap_or_else(|| self.a.zero_like())
    }

    /// `Q^M`, the form `Q(M (x, y, z)^T)`. Invertibility of `M` is not
    /// required for the expansion itself; see [`act`] for the checked
    /// version.
    pub fn act_unchecked(&self, m: &Mat3<R>) -> Self {
        let cols = [m.column(0), m.column(1), m.column(2)];
        TernaryForm {
            a: self.eval(&cols[0]),
            b: self.eval(&cols[1]),
            c: self.eval(&cols[2]),
            alpha: self.polar(&cols[1], &cols[2]),
            beta: self.polar(&cols[2], &cols[0]),
            gamma: self.polar(&cols[0], &cols[1]),
        }
    }

    fn square_mut(&mut self, i: usize) -> &mut R {
        [&mut self.a, &mut self.b, &mut self.c].into_iter().nth(i).unwrap()
    }

    fn cross_mut(&mut self, i: usize, j: usize) -> &mut R {
        match (i.min(j), i.max(j)) {
            (1, 2) => &mut self.alpha,
            (0, 2) => &mut self.beta,
            (0, 1) => &mut self.gamma,
            _ => panic!("cross coefficient needs distinct indices"),
        }
    }

    /// `Q^E` for an elementary move, without forming the matrix.
    pub fn apply_move(&self, mv: &ElementaryMove<R>) -> Self {
        let mut out = self.clone();
        match mv {
            ElementaryMove::Scale { axis, lambda } => {
                let i = axis.index();
                let sq = out.square_mut(i);
                *sq = sq.clone() * lambda.clone() * lambda.clone();
                for j in (0..3).filter(|&j| j != i) {
                    let c = out.cross_mut(i, j);
                    *c = c.clone() * lambda.clone();
                }
            }
            ElementaryMove::Swap { i, j } => {
                let (i, j) = (i.index(), j.index());
                let k = 3 - i - j;
                *out.square_mut(i) = self.square_coeff(j).clone();
                *out.square_mut(j) = self.square_coeff(i).clone();
                *out.cross_mut(i, k) = self.cross_coeff(j, k).clone();
                *out.cross_mut(j, k) = self.cross_coeff(i, k).clone();
            }
            ElementaryMove::Shear { target, source, mu } => {
                // x_t -> x_t + mu x_s
                let (t, s) = (target.index(), source.index());
                let r = 3 - t - s;
                let (qt, qts, qtr) = (self.square_coeff(t), self.cross_coeff(t, s), self.cross_coeff(t, r));
                if !mu.is_zero() {
                    *out.square_mut(s) = self.square_coeff(s).clone()
                        + mu.clone() * (mu.clone() * qt.clone() + qts.clone());
                    *out.cross_mut(t, s) = qts.clone() + qt.int_like(2) * mu.clone() * qt.clone();
                    *out.cross_mut(s, r) = self.cross_coeff(s, r).clone() + mu.clone() * qtr.clone();
                }
            }
        }
        out
    }

    /// Partial derivatives `(∂x Q, ∂y Q, ∂z Q)` evaluated at `v`.
    pub fn gradient(&self, v: &[R; 3]) -> [R; 3] {
        let two = self.a.int_like(2);
        let [x, y, z] = v.clone();
        [
            two.clone() * self.a.clone() * x.clone() + self.beta.clone() * z.clone() + self.gamma.clone() * y.clone(),
            two.clone() * self.b.clone() * y.clone() + self.alpha.clone() * z.clone() + self.gamma.clone() * x.clone(),
            two * self.c.clone() * z + self.alpha.clone() * y + self.beta.clone() * x,
        ]
    }
}

/// `Q^M` for invertible `M`.
pub fn act<R: Ring>(q: &TernaryForm<R>, m: &Mat3<R>) -> Result<TernaryForm<R>> {
    if !m.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(q.act_unchecked(m))
}

/// `δ(Q) = 4abc + αβγ − aα² − bβ² − cγ²`.
pub fn delta<R: Ring>(q: &TernaryForm<R>) -> R {
    let TernaryForm { a, b, c, alpha, beta, gamma } = q.clone();
    a.int_like(4) * a.clone() * b.clone() * c.clone() + alpha.clone() * beta.clone() * gamma.clone()
        - a * alpha.clone() * alpha
        - b * beta.clone() * beta
        - c * gamma.clone() * gamma
}

/// The six σ generators in the fixed order
/// `(4ab−γ², 4bc−α², 4ca−β², 2aα−βγ, 2bβ−γα, 2cγ−αβ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaGens<R>(pub [R; 6]);

impl<R: Ring> SigmaGens<R> {
    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|g| g.is_zero())
    }

    /// The 2x2 minor names used by the shear laws: σ11 = g2, σ22 = g3,
    /// σ33 = g1, σ23 = g4, σ31 = g5, σ12 = g6.
    pub fn s11(&self) -> &R {
        &self.0[1]
    }
    pub fn s22(&self) -> &R {
        &self.0[2]
    }
    pub fn s33(&self) -> &R {
        &self.0[0]
    }
    pub fn s23(&self) -> &R {
        &self.0[3]
    }
    pub fn s31(&self) -> &R {
        &self.0[4]
    }
    pub fn s12(&self) -> &R {
        &self.0[5]
    }
}

pub fn sigma_generators<R: Ring>(q: &TernaryForm<R>) -> SigmaGens<R> {
    let TernaryForm { a, b, c, alpha, beta, gamma } = q.clone();
    let four = a.int_like(4);
    let two = a.int_like(2);
    SigmaGens([
        four.clone() * a.clone() * b.clone() - gamma.clone() * gamma.clone(),
        four.clone() * b.clone() * c.clone() - alpha.clone() * alpha.clone(),
        four * c.clone() * a.clone() - beta.clone() * beta.clone(),
        two.clone() * a * alpha.clone() - beta.clone() * gamma.clone(),
        two.clone() * b * beta.clone() - gamma.clone() * alpha.clone(),
        two * c * gamma - alpha * beta,
    ])
}

/// `σ′(Q) = (α, β, γ)`, defined in characteristic 2 only.
pub fn sigma_prime<R: Ring>(q: &TernaryForm<R>) -> Result<[R; 3]> {
    if q.a.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    Ok([q.alpha.clone(), q.beta.clone(), q.gamma.clone()])
}

/// Coefficients `w` with `δ = Σ w_i g_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaWitness<R>(pub [R; 6]);

/// The witness `(c, −a, b, −α, 0, 0)`, re-verified by expansion.
pub fn delta_sigma_witness<R: Ring>(q: &TernaryForm<R>) -> DeltaWitness<R> {
    let z = q.a.zero_like();
    let w = [q.c.clone(), -q.a.clone(), q.b.clone(), -q.alpha.clone(), z.clone(), z];
    let g = sigma_generators(q);
    let combo = w
        .iter()
        .zip(&g.0)
        .fold(q.a.zero_like(), |acc, (wi, gi)| acc + wi.clone() * gi.clone());
    assert!(combo == delta(q), "witness identity failed for {q}");
    DeltaWitness(w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<R>(pub [[R; 3]; 3]);

/// `[[2a, γ, β], [γ, 2b, α], [β, α, 2c]]`.
pub fn gram_matrix<R: Ring>(q: &TernaryForm<R>) -> GramMatrix<R> {
    let two = q.a.int_like(2);
    let TernaryForm { a, b, c, alpha, beta, gamma } = q.clone();
    GramMatrix([
        [two.clone() * a, gamma.clone(), beta.clone()],
        [gamma, two.clone() * b, alpha.clone()],
        [beta, alpha, two * c],
    ])
}

impl<R: Ring> GramMatrix<R> {
    pub fn det(&self) -> R {
        Mat3::new(self.0.clone()).det().clone()
    }
}

impl GramMatrix<Scalar> {
    /// Rank over the field; only meaningful away from characteristic 2.
    pub fn rank(&self) -> Result<usize> {
        let f = self.0[0][0].field.clone();
        if f.characteristic() == 2 {
            return Err(Error::Unsupported("Gram rank in characteristic 2".into()));
        }
        Ok(rank3(&self.0))
    }
}

pub(crate) fn rank3(m: &[[Scalar; 3]; 3]) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..3).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][col].inverse().unwrap();
        for r in 0..3 {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone() * inv.clone();
                for k in 0..3 {
                    a[r][k] = a[r][k].clone() - f.clone() * a[rank][k].clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A form being reduced, together with the accumulated coordinate change
/// and unit: always `form = unit * act(original, transform)`.
#[derive(Clone, Debug)]
pub(crate) struct Tracker<R> {
    pub form: TernaryForm<R>,
    pub transform: Mat3<R>,
    pub unit: R,
}

impl<R: Ring> Tracker<R> {
    pub fn new(q: &TernaryForm<R>) -> Self {
        Tracker { form: q.clone(), transform: Mat3::identity(&q.a), unit: q.a.one_like() }
    }

    pub fn apply_matrix(&mut self, m: &Mat3<R>) {
        self.form = self.form.act_unchecked(m);
        self.transform = self.transform.mul(m);
    }

    pub fn apply(&mut self, mv: ElementaryMove<R>) {
        self.form = self.form.apply_move(&mv);
        self.transform = self.transform.apply_move(&mv);
    }

    pub fn multiply(&mut self, u: &R) {
        self.form = self.form.scale(u);
        self.unit = self.unit.clone() * u.clone();
    }
}

impl<R: Ring> fmt::Display for TernaryForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const MONOS: [&str; 6] = ["x^2", "y^2", "z^2", "y*z", "z*x", "x*y"];
        let mut parts = Vec::new();
        for (c, m) in self.coeffs().iter().zip(MONOS) {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            if c.is_one() {
                parts.push(m.to_string());
            } else if s[1..].contains(" + ") || s[1..].contains(" - ") {
                parts.push(format!("({s})*{m}"));
            } else {
                parts.push(format!("{s}*{m}"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
