//! Reductions in characteristic 2.
//!
//! Reduced central fibre: one cross term is a unit and the binary part
//! splits by Hensel's lemma. Non-reduced central fibre: bring the form to
//! `ax^2 + by^2 + cz^2 + t^n xy`, move the singular point of the total
//! space to `[0:1:0]`, then kill `b` degree by degree.

use super::{central_fiber, Ctx, LocalFormResult, LocalTag};
use crate::error::{Error, Result};
use crate::exactalg::{
    hensel_factor_quadratic, solve_quadratic_char2, Axis, ElementaryMove, Mat3, Ring, Scalar, Series, Valuation,
};
use crate::fiberlab::{classify_fiber, split_matrix, FiberType};
use crate::quadform::{TernaryForm, Tracker};

use Axis::{X, Y, Z};

/// How many times the `[0:0:1]` case is retried before giving up.
const RETRIES: usize = 3;

fn check_char2(ctx: &Ctx) -> Result<()> {
    if ctx.field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic);
    }
    Ok(())
}

fn no_root(what: String) -> Error {
    Error::NoResidueRoot(what)
}

fn sqrt(c: &Scalar) -> Scalar {
    c.sqrt().expect("finite fields of characteristic 2 are perfect")
}

/// `s = e(t)^2 + t o(t)^2`; returns `(e, o)`.
fn square_split(s: &Series, ctx: &Ctx) -> (Series, Series) {
    let (ev, od) = s.even_odd();
    let root = |v: &[crate::exactalg::Elem]| {
        let cs: Vec<_> = v.iter().map(|c| ctx.field.sqrt(c).unwrap()).collect();
        Series::from_coeffs(&ctx.field, &ctx.var, ctx.n, &cs)
    };
    (root(&ev), root(&od))
}

pub fn normalize_char2_reduced(q: &TernaryForm<Series>) -> Result<LocalFormResult> {
    let ctx = Ctx::for_form(q)?;
    check_char2(&ctx)?;
    if classify_fiber(&central_fiber(q)?)? == FiberType::NonReduced {
        return Err(Error::Inconsistent("the central fibre is not reduced".into()));
    }
    let mut tr = Tracker::new(&ctx.pad_form(q));
    let tag = reduced_steps(&mut tr, &ctx)?;
    ctx.finish(tr, tag, Vec::new())
}

fn reduced_steps(tr: &mut Tracker<Series>, ctx: &Ctx) -> Result<LocalTag> {
    if !tr.form.alpha.is_unit() {
        if tr.form.beta.is_unit() {
            tr.apply(ElementaryMove::swap(X, Y));
        } else {
            tr.apply(ElementaryMove::swap(X, Z));
        }
    }
    let ai = tr.form.alpha.inverse().unwrap();
    tr.apply(ElementaryMove::scale(Y, ai));
    let beta = tr.form.beta.clone();
    if !beta.is_zero() {
        tr.apply(ElementaryMove::shear(Y, X, -beta));
    }
    let gamma = tr.form.gamma.clone();
    if !gamma.is_zero() {
        tr.apply(ElementaryMove::shear(Z, X, -gamma));
    }
    // a x^2 + b y^2 + c z^2 + yz
    if !tr.form.b.is_unit() {
        if tr.form.c.is_unit() {
            tr.apply(ElementaryMove::swap(Y, Z));
        } else {
            tr.apply(ElementaryMove::shear(Z, Y, ctx.one()));
        }
    }
    let b = tr.form.b.clone();
    let (d, e) = hensel_factor_quadratic(&b, &tr.form.c)?;
    tr.apply_matrix(&split_matrix(&d, &e));
    tr.apply(ElementaryMove::scale(Z, b.inverse().unwrap()));
    // a' x^2 + yz
    let a = tr.form.a.clone();
    if a.is_unit() {
        tr.apply(ElementaryMove::scale(Y, a.clone()));
        tr.multiply(&a.inverse().unwrap());
        return Ok(LocalTag::Smooth);
    }
    let m = ctx.guard(&a, "a")?;
    tr.apply(ElementaryMove::swap(X, Z));
    let c1 = ctx.div_t(&a, m);
    tr.apply(ElementaryMove::scale(X, c1.clone()));
    tr.multiply(&c1.inverse().unwrap());
    Ok(LocalTag::Char2Red(m - 1))
}

/// A form `ax^2 + by^2 + cz^2 + t^n xy` with its certificate.
#[derive(Clone, Debug)]
pub struct Stage1 {
    pub form: TernaryForm<Series>,
    pub transform: Mat3<Series>,
    pub unit: Series,
    pub n: usize,
}

pub fn normalize_char2_nonreduced_stage1(q: &TernaryForm<Series>) -> Result<Stage1> {
    let ctx = Ctx::for_form(q)?;
    check_char2(&ctx)?;
    let mut tr = Tracker::new(&ctx.pad_form(q));
    let n = stage1(&mut tr, &ctx)?;
    Ok(Stage1 { form: tr.form, transform: tr.transform, unit: tr.unit, n })
}

fn val_key(s: &Series) -> usize {
    match s.valuation() {
        Valuation::Finite(v) => v,
        Valuation::AtLeastPrecision(_) => usize::MAX,
    }
}

fn stage1(tr: &mut Tracker<Series>, ctx: &Ctx) -> Result<usize> {
    let f = &tr.form;
    if f.alpha.is_zero() && f.beta.is_zero() && f.gamma.is_zero() {
        return Err(Error::WildOrPrecision);
    }
    // Cross terms in order of preference: γ, β, α.
    let keys = [val_key(&f.gamma), val_key(&f.beta), val_key(&f.alpha)];
    let best = (0..3).min_by_key(|&i| (keys[i], i)).unwrap();
    match best {
        1 => tr.apply(ElementaryMove::swap(Y, Z)),
        2 => tr.apply(ElementaryMove::swap(X, Z)),
        _ => {}
    }
    if val_key(&tr.form.beta) > val_key(&tr.form.alpha) {
        tr.apply(ElementaryMove::swap(X, Y));
    }
    let n = ctx.guard(&tr.form.gamma, "the leading cross term")?;
    let g = ctx.div_t(&tr.form.gamma, n);
    tr.multiply(&g.inverse().unwrap());
    let al = tr.form.alpha.clone();
    if !al.is_zero() {
        tr.apply(ElementaryMove::shear(X, Z, -ctx.div_t(&al, n)));
    }
    let be = tr.form.beta.clone();
    if !be.is_zero() {
        tr.apply(ElementaryMove::shear(Y, Z, -ctx.div_t(&be, n)));
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SingularPoint {
    /// `[0:1:0]`
    Y,
    /// `[0:0:1]`
    Z,
}

/// For `ax^2 + by^2 + cz^2 + t^n xy` with `n ≥ 2`: the singular point of
/// the total space on the central fibre, and a coordinate change moving it
/// to `[0:1:0]` when possible (otherwise it is `[0:0:1]`, transform the
/// identity).
pub fn locate_singularity_char2(form: &TernaryForm<Series>) -> Result<(SingularPoint, Mat3<Series>)> {
    let ctx = Ctx::for_form(form)?;
    check_char2(&ctx)?;
    let n = form.gamma.valuation().finite().unwrap_or(0);
    let shape = form.alpha.is_zero() && form.beta.is_zero() && form.gamma == ctx.t_pow(n);
    if n < 2 || !shape {
        return Err(Error::Inconsistent("expected a x^2 + b y^2 + c z^2 + t^n xy with n >= 2".into()));
    }
    let (pt, moves) = locate_moves(form, &ctx)?;
    Ok((pt, crate::exactalg::product(&moves, &ctx.one())))
}

fn locate_moves(form: &TernaryForm<Series>, ctx: &Ctx) -> Result<(SingularPoint, Vec<ElementaryMove<Series>>)> {
    let line = |k: usize| [&form.a, &form.b, &form.c].map(|s| sqrt(&s.coeff(k)));
    let (u, v) = (line(0), line(1));
    // Cross product; characteristic 2 has no signs.
    let p = [
        u[1].clone() * v[2].clone() + u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() + u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() + u[1].clone() * v[0].clone(),
    ];
    if p.iter().all(|c| c.is_zero()) {
        return Err(Error::NotCanonicalTotalSpace(
            "the singular locus of the total space contains a line of the central fibre".into(),
        ));
    }
    let mut moves = Vec::new();
    let p = if p[1].is_zero() && !p[0].is_zero() {
        moves.push(ElementaryMove::swap(X, Y));
        [p[1].clone(), p[0].clone(), p[2].clone()]
    } else {
        p
    };
    if p[1].is_zero() {
        return Ok((SingularPoint::Z, moves));
    }
    let inv = p[1].inverse().unwrap();
    let (p0, p2) = (p[0].clone() * inv.clone(), p[2].clone() * inv);
    if !p0.is_zero() {
        moves.push(ElementaryMove::shear(X, Y, ctx.scalar(&p0)));
    }
    if !p2.is_zero() {
        moves.push(ElementaryMove::shear(Z, Y, ctx.scalar(&p2)));
    }
    Ok((SingularPoint::Y, moves))
}

pub fn normalize_char2_nonreduced(q: &TernaryForm<Series>) -> Result<LocalFormResult> {
    let ctx = Ctx::for_form(q)?;
    check_char2(&ctx)?;
    if classify_fiber(&central_fiber(q)?)? != FiberType::NonReduced {
        return Err(Error::Inconsistent("the central fibre is reduced".into()));
    }
    let mut tr = Tracker::new(&ctx.pad_form(q));
    let mut notes = Vec::new();
    for _ in 0..RETRIES {
        let n = stage1(&mut tr, &ctx)?;
        let on_y = if n >= 2 {
            let (pt, moves) = locate_moves(&tr.form, &ctx)?;
            for mv in moves {
                tr.apply(mv);
            }
            pt == SingularPoint::Y
        } else {
            true
        };
        let vc = val_key(&tr.form.c);
        if on_y && vc <= 1 {
            let tag = if vc == 0 { case_one(&mut tr, &ctx, n)? } else { case_two(&mut tr, &ctx, n)? };
            return ctx.finish(tr, tag, notes);
        }
        notes.push("singular point at [0:0:1]; swapped y and z and retried".to_string());
        tr.apply(ElementaryMove::swap(Y, Z));
    }
    Err(Error::Unnormalizable(format!(
        "the singular point stays at [0:0:1] after {RETRIES} retries"
    )))
}

/// `ax^2 + by^2 + cz^2 + t^s xy`, `c` a unit; ends at `tx^2 + z^2 + t^s xy`.
fn case_one(tr: &mut Tracker<Series>, ctx: &Ctx, s: usize) -> Result<LocalTag> {
    let ci = tr.form.c.inverse().unwrap();
    tr.multiply(&ci);
    zero_a0(tr, ctx);
    if tr.form.a.coeff(1).is_zero() {
        // Only possible for s = 1: pick y -> y + ρx making a_1 nonzero.
        let (b1, g1) = (tr.form.b.coeff(1), tr.form.gamma.coeff(1));
        let rho = ctx
            .field
            .elements()
            .map(|e| Scalar::new(&ctx.field, e))
            .find(|r| !(r.clone() * r.clone() * b1.clone() + r.clone() * g1.clone()).is_zero())
            .ok_or_else(|| no_root(format!("no ρ with ρ^2 b_1 + ρ γ_1 ≠ 0 in {}", ctx.field.name())))?;
        tr.apply(ElementaryMove::shear(Y, X, ctx.scalar(&rho)));
        zero_a0(tr, ctx);
    }
    let a1 = tr.form.a.coeff(1);
    if a1.is_zero() {
        return Err(Error::Inconsistent("a has valuation above 1 after locating the singular point".into()));
    }
    let g0 = tr.form.gamma.coeff(s);
    loop {
        let k = val_key(&tr.form.b);
        if k >= ctx.trusted() {
            break;
        }
        let bk = tr.form.b.coeff(k);
        let l = k / 2;
        if k.is_multiple_of(2) {
            tr.apply(ElementaryMove::shear(Z, Y, ctx.mono(&sqrt(&bk), l)));
        } else if l < s {
            let g = tr.form.gamma.coeff(l + 1);
            let mu = solve_quadratic_char2(&a1, &g, &bk)?.ok_or_else(|| {
                no_root(format!("{a1}*μ^2 + {g}*μ + {bk} has no root in {}", ctx.field.name()))
            })?;
            tr.apply(ElementaryMove::shear(X, Y, ctx.mono(&mu, l)));
        } else {
            let nu = bk * g0.inverse().unwrap();
            tr.apply(ElementaryMove::shear(X, Y, ctx.mono(&nu, 2 * l + 1 - s)));
        }
    }
    // a = e^2 + t w^2; drop e^2 into z, then scale x.
    let (e, w) = square_split(&tr.form.a, ctx);
    if !e.is_zero() {
        tr.apply(ElementaryMove::shear(Z, X, e));
    }
    tr.apply(ElementaryMove::scale(X, w.inverse().unwrap()));
    let g = ctx.div_t(&tr.form.gamma, s);
    tr.apply(ElementaryMove::scale(Y, g.inverse().unwrap()));
    Ok(LocalTag::Char2NonRedI(s))
}

/// With `c = 1`, make `a(0) = 0` by `z -> z + sqrt(a(0)) x`.
fn zero_a0(tr: &mut Tracker<Series>, ctx: &Ctx) {
    let a0 = tr.form.a.constant_term();
    if !a0.is_zero() {
        tr.apply(ElementaryMove::shear(Z, X, ctx.scalar(&sqrt(&a0))));
    }
}

/// `ax^2 + by^2 + cz^2 + t^s xy`, `v(c) = 1`; ends at `x^2 + tz^2 + t^s xy`.
fn case_two(tr: &mut Tracker<Series>, ctx: &Ctx, s: usize) -> Result<LocalTag> {
    if !tr.form.a.is_unit() {
        tr.apply(ElementaryMove::swap(X, Y));
    }
    let ai = tr.form.a.inverse().ok_or_else(|| Error::Inconsistent("no unit square coefficient".into()))?;
    tr.multiply(&ai);
    let c1 = tr.form.c.coeff(1);
    let g0 = tr.form.gamma.coeff(s);
    loop {
        let k = val_key(&tr.form.b);
        if k >= ctx.trusted() {
            break;
        }
        let bk = tr.form.b.coeff(k);
        let l = k / 2;
        if k % 2 == 1 {
            let mu = sqrt(&(bk * c1.inverse().unwrap()));
            tr.apply(ElementaryMove::shear(Z, Y, ctx.mono(&mu, l)));
        } else if l <= s {
            let g = tr.form.gamma.coeff(l);
            let one = Scalar::one(&ctx.field);
            let la = solve_quadratic_char2(&one, &g, &bk)?.ok_or_else(|| {
                no_root(format!("λ^2 + {g}*λ + {bk} has no root in {}", ctx.field.name()))
            })?;
            tr.apply(ElementaryMove::shear(X, Y, ctx.mono(&la, l)));
        } else {
            let nu = bk * g0.inverse().unwrap();
            tr.apply(ElementaryMove::shear(X, Y, ctx.mono(&nu, 2 * l - s)));
        }
    }
    let h = ctx.div_t(&tr.form.c, 1);
    tr.multiply(&h.inverse().unwrap());
    // a = g^2 + t h^2; move t h^2 into z, then scale x.
    let (g, h) = square_split(&tr.form.a, ctx);
    if !h.is_zero() {
        tr.apply(ElementaryMove::shear(Z, X, h));
    }
    tr.apply(ElementaryMove::scale(X, g.inverse().unwrap()));
    let gm = ctx.div_t(&tr.form.gamma, s);
    tr.apply(ElementaryMove::scale(Y, gm.inverse().unwrap()));
    Ok(LocalTag::Char2NonRedII(s))
}
