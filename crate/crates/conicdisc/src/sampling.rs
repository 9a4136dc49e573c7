//! Seeded random instances: scalars, series, invertible matrices, and conic
//! bundles `u * Can^M` with a known canonical form.

use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{Axis, Elem, ElementaryMove, Field, Mat3, Poly, Ring, Scalar, Series};
use crate::localforms::{canonical_form, LocalTag};
use crate::quadform::TernaryForm;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over a finite field; `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3` over the
/// rationals.
pub fn random_elem(rng: &mut SampleRng, f: &Field) -> Elem {
    match f.order() {
        Some(q) => Elem::Fq(rng.gen_range(0..q)),
        None => {
            let n = BigInt::from(rng.gen_range(-3i64..=3));
            let d = BigInt::from(rng.gen_range(1i64..=3));
            Elem::Rat(BigRational::new(n, d))
        }
    }
}

pub fn random_nonzero_elem(rng: &mut SampleRng, f: &Field) -> Elem {
    loop {
        let e = random_elem(rng, f);
        if !f.is_zero(&e) {
            return e;
        }
    }
}

pub fn random_scalar(rng: &mut SampleRng, f: &Field) -> Scalar {
    Scalar::new(f, random_elem(rng, f))
}

/// A series whose coefficients below `degree` are random and the rest zero.
pub fn random_series(rng: &mut SampleRng, f: &Field, var: &Arc<str>, precision: usize, degree: usize) -> Series {
    let cs: Vec<Elem> = (0..degree.min(precision)).map(|_| random_elem(rng, f)).collect();
    Series::from_coeffs(f, var, precision, &cs)
}

pub fn random_unit_series(rng: &mut SampleRng, f: &Field, var: &Arc<str>, precision: usize, degree: usize) -> Series {
    let mut cs: Vec<Elem> = (0..degree.min(precision)).map(|_| random_elem(rng, f)).collect();
    cs[0] = random_nonzero_elem(rng, f);
    Series::from_coeffs(f, var, precision, &cs)
}

/// Random matrix over `k[[t]]` whose reduction mod `t` is invertible.
pub fn random_gl3_series(rng: &mut SampleRng, f: &Field, var: &Arc<str>, precision: usize, degree: usize) -> Mat3<Series> {
    loop {
        let es: Vec<Series> = (0..9).map(|_| random_series(rng, f, var, precision, degree)).collect();
        let m = Mat3::from_fn(|i, j| es[3 * i + j].clone());
        if m.is_invertible() {
            return m;
        }
    }
}

fn small_int(rng: &mut SampleRng, f: &Field, lo: i64, hi: i64) -> Elem {
    f.from_i64(rng.gen_range(lo..=hi))
}

/// A polynomial in `t` of the given degree with integer coefficients in
/// `[-1, 1]`, times `t`.
fn small_t_multiple(rng: &mut SampleRng, f: &Field, var: &Arc<str>, precision: usize, degree: usize) -> Series {
    let mut cs = vec![f.zero()];
    cs.extend((0..degree).map(|_| small_int(rng, f, -1, 1)));
    Series::from_coeffs(f, var, precision, &cs)
}

/// `P * D * (I + tX)` with `P` a permutation, `D` diagonal with entries in
/// `{1, 4}` and `X` of small integer entries, so every residue the
/// normalization meets stays a square.
pub fn random_square_gl3_series(
    rng: &mut SampleRng,
    f: &Field,
    var: &Arc<str>,
    precision: usize,
    degree: usize,
) -> Mat3<Series> {
    let zero = Series::zero(f, var, precision);
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p = Mat3::from_fn(|i, j| if perm[j] == i { zero.one_like() } else { zero.clone() });
    let diag: Vec<Series> = (0..3)
        .map(|_| {
            let s = Scalar::new(f, small_int(rng, f, 1, 2));
            zero.scalar_like(&(s.clone() * s))
        })
        .collect();
    let d = Mat3::from_fn(|i, j| if i == j { diag[i].clone() } else { zero.clone() });
    let xs: Vec<Series> = (0..9).map(|_| small_t_multiple(rng, f, var, precision, degree)).collect();
    let x = Mat3::from_fn(|i, j| if i == j { xs[3 * i + j].clone() + zero.one_like() } else { xs[3 * i + j].clone() });
    p.mul(&d).mul(&x)
}

/// A random tag with singular central fibre and `v_t(δ) ≤ 13`.
pub fn random_singular_tag(rng: &mut SampleRng, characteristic: u64) -> LocalTag {
    if characteristic == 2 {
        match rng.gen_range(0..3) {
            0 => LocalTag::Char2Red(rng.gen_range(0..=8)),
            1 => LocalTag::Char2NonRedI(rng.gen_range(1..=6)),
            _ => LocalTag::Char2NonRedII(rng.gen_range(1..=6)),
        }
    } else if rng.gen_bool(0.5) {
        LocalTag::Char0Red(rng.gen_range(0..=8))
    } else {
        LocalTag::Char0NonRed(rng.gen_range(2..=9))
    }
}

#[derive(Clone, Debug)]
pub struct SampledBundle {
    pub tag: LocalTag,
    pub form: TernaryForm<Series>,
}

/// `u * Can^M` for a random singular tag. Over finite fields `M` and `u`
/// are unrestricted; over the rationals `M` comes from
/// [`random_square_gl3_series`] and `u` is a square integer plus a small
/// multiple of `t`.
pub fn random_bundle(rng: &mut SampleRng, f: &Field, var: &Arc<str>, precision: usize) -> SampledBundle {
    let tag = random_singular_tag(rng, f.characteristic());
    let can = canonical_form(tag, f, var, precision);
    let (m, u) = if f.is_finite() {
        (random_gl3_series(rng, f, var, precision, precision), random_unit_series(rng, f, var, precision, precision))
    } else {
        let m = random_square_gl3_series(rng, f, var, precision, 2);
        let s = Scalar::new(f, small_int(rng, f, 1, 2));
        let w = small_t_multiple(rng, f, var, precision, 2);
        let u = w + Series::zero(f, var, precision).scalar_like(&(s.clone() * s));
        (m, u)
    };
    SampledBundle { tag, form: can.act_unchecked(&m).scale(&u) }
}

/// A polynomial of total degree at most `max_degree` with coefficients from
/// [`random_elem`].
pub fn random_poly(rng: &mut SampleRng, f: &Field, vars: &Arc<Vec<String>>, max_degree: u32) -> Poly {
    let n = vars.len();
    let mut terms = Vec::new();
    let mut exps = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..=max_degree).map(move |d| {
                    let mut e2 = e.clone();
                    e2.push(d);
                    e2
                })
            })
            .collect();
    }
    for e in exps {
        if e.iter().sum::<u32>() <= max_degree && rng.gen_bool(0.5) {
            terms.push((e, random_elem(rng, f)));
        }
    }
    Poly::from_terms(f, vars, terms)
}

/// A random form over `R`, one call of `entry` per coefficient.
pub fn random_form<R: Ring>(rng: &mut SampleRng, mut entry: impl FnMut(&mut SampleRng) -> R) -> TernaryForm<R> {
    let v: Vec<R> = (0..6).map(|_| entry(rng)).collect();
    TernaryForm::from_array(std::array::from_fn(|i| v[i].clone()))
}

/// A random 3x3 matrix, not necessarily invertible.
pub fn random_matrix<R: Ring>(rng: &mut SampleRng, mut entry: impl FnMut(&mut SampleRng) -> R) -> Mat3<R> {
    let v: Vec<R> = (0..9).map(|_| entry(rng)).collect();
    Mat3::from_fn(|i, j| v[3 * i + j].clone())
}

/// A random elementary move: shears use `entry`, scales use `unit`.
pub fn random_move<R: Ring>(
    rng: &mut SampleRng,
    entry: &mut impl FnMut(&mut SampleRng) -> R,
    unit: &mut impl FnMut(&mut SampleRng) -> R,
) -> ElementaryMove<R> {
    let i = rng.gen_range(0..3);
    let j = (i + rng.gen_range(1..3)) % 3;
    let (i, j) = (Axis::from_index(i), Axis::from_index(j));
    match rng.gen_range(0..4) {
        0 => ElementaryMove::scale(i, unit(rng)),
        1 => ElementaryMove::swap(i, j),
        _ => ElementaryMove::shear(i, j, entry(rng)),
    }
}

/// A product of `len` random moves; invertible over any ring.
pub fn random_elementary_product<R: Ring>(
    rng: &mut SampleRng,
    proto: &R,
    len: usize,
    mut entry: impl FnMut(&mut SampleRng) -> R,
    mut unit: impl FnMut(&mut SampleRng) -> R,
) -> Mat3<R> {
    let mut m = Mat3::identity(proto);
    for _ in 0..len {
        m = m.apply_move(&random_move(rng, &mut entry, &mut unit));
    }
    m
}
