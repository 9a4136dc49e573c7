//! Reduction away from characteristic 2: diagonalize, then pull the powers
//! of `t` out of the binary part.

use super::{central_fiber, Ctx, LocalFormResult, LocalTag};
use crate::error::{Error, Result};
use crate::exactalg::{hensel_sqrt, Axis, ElementaryMove, Ring, Series};
use crate::fiberlab::{classify_fiber, FiberType};
use crate::quadform::{TernaryForm, Tracker};

use Axis::{X, Y, Z};

pub fn normalize_char_ne2(q: &TernaryForm<Series>) -> Result<LocalFormResult> {
    let ctx = Ctx::for_form(q)?;
    if ctx.field.characteristic() == 2 {
        return Err(Error::WrongCharacteristic);
    }
    let fiber = classify_fiber(&central_fiber(q)?)?;
    let mut tr = Tracker::new(&ctx.pad_form(q));
    make_a_unit(&mut tr, &ctx);
    split_off_x(&mut tr);
    let ai = tr.form.a.inverse().expect("a is a unit");
    tr.multiply(&ai);
    let tag = if fiber == FiberType::NonReduced {
        nonreduced_tail(&mut tr, &ctx)?
    } else {
        reduced_tail(&mut tr, &ctx)?
    };
    ctx.finish(tr, tag, Vec::new())
}

fn make_a_unit(tr: &mut Tracker<Series>, ctx: &Ctx) {
    let f = &tr.form;
    let one = ctx.one();
    if f.a.is_unit() {
    } else if f.b.is_unit() {
        tr.apply(ElementaryMove::swap(X, Y));
    } else if f.c.is_unit() {
        tr.apply(ElementaryMove::swap(X, Z));
    } else if f.gamma.is_unit() {
        tr.apply(ElementaryMove::shear(Y, X, one));
    } else if f.beta.is_unit() {
        tr.apply(ElementaryMove::shear(Z, X, one));
    } else {
        tr.apply(ElementaryMove::shear(Z, Y, one));
        tr.apply(ElementaryMove::swap(X, Y));
    }
}

/// Kill `γ` and `β` against the unit `a`.
fn split_off_x(tr: &mut Tracker<Series>) {
    let inv2a = (tr.form.a.int_like(2) * tr.form.a.clone()).inverse().expect("2a is a unit");
    let g = tr.form.gamma.clone();
    if !g.is_zero() {
        tr.apply(ElementaryMove::shear(X, Y, -(g * inv2a.clone())));
    }
    let b = tr.form.beta.clone();
    if !b.is_zero() {
        tr.apply(ElementaryMove::shear(X, Z, -(b * inv2a)));
    }
}

/// Make `b` a unit among `y, z` when one of `b, c, α` is a unit.
fn make_b_unit(tr: &mut Tracker<Series>, ctx: &Ctx, b_unit: bool, c_unit: bool) {
    if b_unit {
    } else if c_unit {
        tr.apply(ElementaryMove::swap(Y, Z));
    } else {
        tr.apply(ElementaryMove::shear(Z, Y, ctx.one()));
    }
}

/// `x^2 + by^2 + cz^2 + αyz` with one of `b, c, α` a unit.
fn reduced_tail(tr: &mut Tracker<Series>, ctx: &Ctx) -> Result<LocalTag> {
    let (bu, cu) = (tr.form.b.is_unit(), tr.form.c.is_unit());
    make_b_unit(tr, ctx, bu, cu);
    let b = tr.form.b.clone();
    let al = tr.form.alpha.clone();
    if !al.is_zero() {
        let inv2b = (b.int_like(2) * b.clone()).inverse().unwrap();
        tr.apply(ElementaryMove::shear(Y, Z, -(al * inv2b)));
    }
    let sb = hensel_sqrt(&tr.form.b)?;
    tr.apply(ElementaryMove::scale(Y, sb.inverse().unwrap()));
    let m = ctx.guard(&tr.form.c, "c")?;
    let d = ctx.div_t(&tr.form.c, m);
    let sd = hensel_sqrt(&d)?;
    tr.apply(ElementaryMove::scale(Z, sd.inverse().unwrap()));
    Ok(if m == 0 { LocalTag::Smooth } else { LocalTag::Char0Red(m - 1) })
}

/// `x^2 + by^2 + cz^2 + αyz` with `b, c, α` all in the maximal ideal.
fn nonreduced_tail(tr: &mut Tracker<Series>, ctx: &Ctx) -> Result<LocalTag> {
    let f = &tr.form;
    let r = [&f.b, &f.c, &f.alpha].iter().map(|s| s.valuation().lower_bound()).min().unwrap();
    let lead = [&f.b, &f.c, &f.alpha].into_iter().find(|s| s.valuation().lower_bound() == r).unwrap().clone();
    ctx.guard(&lead, "the binary part")?;
    if r >= 2 {
        return Err(Error::NotCanonicalTotalSpace(format!(
            "the form reduces to x^2 + {}^{r}*q(y, z); the total space is not normal",
            ctx.var
        )));
    }
    // r = 1.
    let unit_at = |s: &Series| !s.coeff(1).is_zero();
    let (bu, cu) = (unit_at(&f.b), unit_at(&f.c));
    make_b_unit(tr, ctx, bu, cu);
    let b1 = ctx.div_t(&tr.form.b, 1);
    let al = tr.form.alpha.clone();
    if !al.is_zero() {
        let a1 = ctx.div_t(&al, 1);
        let inv2b = (b1.int_like(2) * b1.clone()).inverse().unwrap();
        tr.apply(ElementaryMove::shear(Y, Z, -(a1 * inv2b)));
    }
    let sb = hensel_sqrt(&b1)?;
    tr.apply(ElementaryMove::scale(Y, sb.inverse().unwrap()));
    let v = ctx.guard(&tr.form.c, "c")?;
    let d = ctx.div_t(&tr.form.c, v);
    let sd = hensel_sqrt(&d)?;
    tr.apply(ElementaryMove::scale(Z, sd.inverse().unwrap()));
    Ok(LocalTag::Char0NonRed(v + 1))
}
