use super::*;
use crate::quadform::delta;

fn var() -> Arc<str> {
    Arc::from("t")
}

/// A form whose coefficients are given low degree first.
fn form(f: &Field, n: usize, cs: [&[i64]; 6]) -> TernaryForm<Series> {
    TernaryForm::from_array(cs.map(|c| {
        let es: Vec<Elem> = c.iter().map(|&k| f.from_i64(k)).collect();
        Series::from_coeffs(f, &var(), n, &es)
    }))
}

fn f(p: u64) -> Field {
    if p == 0 {
        Field::rationals()
    } else {
        Field::prime(p).unwrap()
    }
}

fn certify(q: &TernaryForm<Series>, r: &LocalFormResult) {
    let got = q.act_unchecked(&r.transform).scale(&r.unit);
    for (g, w) in got.coeffs().iter().zip(r.canonical_form.coeffs()) {
        let d = (*g).clone() - w.clone();
        assert!(d.valuation().lower_bound() >= r.precision, "{} vs {}", got, r.canonical_form);
    }
    assert!(r.transform.is_invertible());
    assert!(r.unit.is_unit());
    let vq = delta(q).valuation();
    assert_eq!(vq, Valuation::Finite(r.tag.delta_degree()), "{q}: {}", r.tag);
}

const O: &[i64] = &[];
const ONE: &[i64] = &[1];
const T: &[i64] = &[0, 1];
const T2: &[i64] = &[0, 0, 1];

#[test]
fn conic_bundle_and_central_fibre() {
    let q = f(0);
    assert!(is_conic_bundle_local(&form(&q, 8, [ONE, T, T, O, O, O])));
    assert!(!is_conic_bundle_local(&form(&q, 8, [T, T, T, O, O, O])));
    assert!(is_conic_bundle_local(&form(&f(2), 8, [T, O, ONE, O, O, T2])));
    let c = central_fiber(&form(&q, 8, [ONE, ONE, &[0, 0, 0, 1], O, O, O])).unwrap();
    assert_eq!(classify_fiber(&c).unwrap(), FiberType::ReducedSingular);
    let c = central_fiber(&form(&q, 8, [ONE, T, T, O, O, O])).unwrap();
    assert_eq!(classify_fiber(&c).unwrap(), FiberType::NonReduced);
    let c = central_fiber(&form(&f(2), 8, [O, O, T2, O, O, ONE])).unwrap();
    assert_eq!(classify_fiber(&c).unwrap(), FiberType::ReducedSingular);
    assert_eq!(central_fiber(&form(&q, 8, [T, T, T, O, O, O])), Err(Error::NotConicBundle));
}

#[test]
fn char_ne2_examples() {
    let q = form(&f(0), 32, [ONE, ONE, &[0, 0, 0, 1, 1], O, O, O]);
    let r = normalize_char_ne2(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Char0Red(2));
    assert_eq!(r.precision, 28);
    certify(&q, &r);
    let q = form(&f(5), 32, [ONE, T, T, O, O, O]);
    let r = normalize_char_ne2(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Char0NonRed(2));
    certify(&q, &r);
    let q = form(&f(0), 32, [ONE, T2, &[0, 0, 0, 1], O, O, O]);
    assert!(matches!(normalize_char_ne2(&q), Err(Error::NotCanonicalTotalSpace(_))));
}

#[test]
fn char_ne2_mixed_terms() {
    // 2x^2 + 3xy + (1+t) y^2 + t^2 yz + t^5 z^2 over Q.
    let q = form(&f(0), 32, [&[2], &[1, 1], &[0, 0, 0, 0, 0, 1], T2, O, &[3]]);
    let r = normalize(&q);
    // Over Q the later square roots may not exist.
    match r {
        Ok(r) => certify(&q, &r),
        Err(e) => assert!(matches!(e, Error::NoResidueRoot(_)), "{e}"),
    }
    let q = form(&f(5), 32, [T, &[0, 2], O, ONE, O, O]);
    let (r, emb) = normalize_extending(&q, 16).unwrap();
    let q = match &emb {
        Some(e) => embed_series_form(&q, e),
        None => q,
    };
    certify(&q, &r);
}

#[test]
fn char_ne2_precision() {
    let q = form(&f(0), 32, [ONE, ONE, O, O, O, O]);
    assert!(matches!(normalize(&q), Err(Error::PrecisionExhausted(_))));
    let mut c = vec![0; 30];
    c[29] = 1;
    let q = form(&f(0), 32, [ONE, ONE, &c, O, O, O]);
    assert!(matches!(normalize(&q), Err(Error::PrecisionExhausted(_))));
    let q = form(&f(0), 32, [ONE, ONE, ONE, O, O, O]);
    let r = normalize(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Smooth);
    certify(&q, &r);
}

#[test]
fn char2_reduced_examples() {
    let f2 = f(2);
    let q = form(&f2, 32, [O, O, &[0, 0, 0, 1], O, O, ONE]);
    let r = normalize_char2_reduced(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Char2Red(2));
    certify(&q, &r);
    let q = form(&f2, 32, [ONE, T, T2, O, O, ONE]);
    let r = normalize_extending(&q, 16).unwrap().0;
    assert_eq!(r.tag.name(), "Char2Red");
    let q = form(&f2, 32, [ONE, O, O, ONE, O, O]);
    let r = normalize_char2_reduced(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Smooth);
    certify(&q, &r);
    // x^2 + xy + y^2 + t z^2: the residue quadratic does not split over F_2.
    let q = form(&f2, 32, [ONE, ONE, T, O, O, ONE]);
    assert!(matches!(normalize(&q), Err(Error::NoResidueRoot(_))));
    let (r, emb) = normalize_extending(&q, 16).unwrap();
    assert_eq!(emb.unwrap().target.degree(), 2);
    assert_eq!(r.tag, LocalTag::Char2Red(0));
}

#[test]
fn stage1_examples() {
    let f2 = f(2);
    let q = form(&f2, 32, [ONE, T, T2, T, O, O]);
    let s = normalize_char2_nonreduced_stage1(&q).unwrap();
    assert_eq!(s.n, 1);
    let back = q.act_unchecked(&s.transform).scale(&s.unit);
    assert_eq!(back, s.form);
    assert!(s.form.alpha.is_zero() && s.form.beta.is_zero());
    let q = form(&f2, 32, [ONE, T, T2, O, O, O]);
    assert_eq!(normalize_char2_nonreduced_stage1(&q).unwrap_err(), Error::WildOrPrecision);
    let q = form(&f2, 32, [ONE, T, &[0, 0, 0, 1], O, O, T2]);
    let s = normalize_char2_nonreduced_stage1(&q).unwrap();
    assert_eq!((s.n, &s.form), (2, &q));
    assert!(s.unit.is_one());
}

#[test]
fn locate_examples() {
    let f2 = f(2);
    let (pt, m) = locate_singularity_char2(&form(&f2, 32, [T, O, ONE, O, O, T2])).unwrap();
    assert_eq!(pt, SingularPoint::Y);
    assert_eq!(m, Mat3::identity(&Series::zero(&f2, &var(), 32).one_like()));
    let (pt, _) = locate_singularity_char2(&form(&f2, 32, [ONE, O, T, O, O, T2])).unwrap();
    assert_eq!(pt, SingularPoint::Y);
    let (pt, _) = locate_singularity_char2(&form(&f2, 32, [ONE, T, T2, O, O, T2])).unwrap();
    assert_eq!(pt, SingularPoint::Z);
    let r = locate_singularity_char2(&form(&f2, 32, [&[1, 1], O, O, O, O, T2]));
    assert!(matches!(r, Err(Error::NotCanonicalTotalSpace(_))));
    // Lines x + y = 0 and x + z = 0 meet at [1:1:1].
    let q = form(&f2, 32, [&[1, 1], ONE, T, O, O, T2]);
    let (pt, m) = locate_singularity_char2(&q).unwrap();
    assert_eq!(pt, SingularPoint::Y);
    let moved = q.act_unchecked(&m);
    assert!(moved.b.coeff(0).is_zero() && moved.b.coeff(1).is_zero());
}

#[test]
fn char2_nonreduced_examples() {
    let f2 = f(2);
    let q = form(&f2, 32, [T, O, ONE, O, O, T2]);
    let r = normalize_char2_nonreduced(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Char2NonRedI(2));
    certify(&q, &r);
    let q = form(&f2, 32, [ONE, O, T, O, O, T]);
    let r = normalize_char2_nonreduced(&q).unwrap();
    assert_eq!(r.tag, LocalTag::Char2NonRedII(1));
    certify(&q, &r);
    // Killing t^3 y^2 needs a root of μ^2 + μ + 1, which lives in F_4.
    let q = form(&f2, 32, [T, &[0, 0, 0, 1], ONE, O, O, T2]);
    assert!(matches!(normalize_char2_nonreduced(&q), Err(Error::NoResidueRoot(_))));
    let (r, emb) = normalize_extending(&q, 16).unwrap();
    let emb = emb.unwrap();
    assert_eq!(emb.target.degree(), 2);
    assert_eq!(r.tag, LocalTag::Char2NonRedI(2));
    assert_eq!(r.precision, 28);
    certify(&embed_series_form(&q, &emb), &r);
    // The D^1_4 family sits at [0:0:1].
    let q = form(&f2, 32, [ONE, T, T2, O, O, T]);
    assert!(matches!(normalize(&q), Err(Error::Unnormalizable(_))));
}

#[test]
fn char2_nonreduced_messier_inputs() {
    let f2 = f(2);
    // (1+t)x^2 + t^2 y^2 + (t+t^3) z^2 + t^3 yz + t^2 zx + t^2 xy
    let q = form(&f2, 32, [&[1, 1], &[0, 0, 1], &[0, 1, 0, 1], &[0, 0, 0, 1], T2, T2]);
    let (r, emb) = normalize_extending(&q, 16).unwrap();
    let q = emb.map_or(q.clone(), |e| embed_series_form(&q, &e));
    certify(&q, &r);
}

#[test]
fn surface_classifier() {
    use Verdict::*;
    let v = |d, r| classify_surface_singularity(d, r).unwrap().verdict;
    assert_eq!(v(4, false), UniqueD(4));
    assert_eq!(v(2, false), TwoA1);
    assert_eq!(v(1, true), RegularTotalSpace);
    assert_eq!(v(0, true), RegularTotalSpace);
    assert_eq!(v(5, true), UniqueA(4));
    assert_eq!(classify_surface_singularity(7, true).unwrap().m, 8);
    assert!(matches!(classify_surface_singularity(1, false), Err(Error::Inconsistent(_))));
}

#[test]
fn artin_labels() {
    let f2 = f(2);
    let l = artin_refine(&form(&f2, 32, [ONE, T, T2, O, O, T])).unwrap();
    assert_eq!(l.family, ArtinFamily::DEven { r: 1, s: 1 });
    assert_eq!(l.label, "D^1_4");
    assert_eq!(l.artin_local_equation.unwrap().to_string(), "t^2*y + t*x*y + t*y^2 + x^2");
    let l = artin_refine(&form(&f2, 32, [ONE, T, &[0, 0, 0, 1], O, O, T2])).unwrap();
    assert_eq!(l.label, "D^1_7");
    let l = artin_refine(&form(&f2, 32, [T, O, ONE, O, O, T2])).unwrap();
    assert_eq!(l.label, "D^0_4");
    let l = artin_refine(&form(&f2, 32, [T, O, ONE, O, O, T])).unwrap();
    assert_eq!(l.family, ArtinFamily::TwoA1);
    let l = artin_refine(&form(&f2, 32, [ONE, O, T, O, O, &[0, 0, 0, 1]])).unwrap();
    assert_eq!(l.label, "D^0_7");
    assert!(matches!(artin_refine(&form(&f2, 32, [ONE, ONE, T, O, O, T])), Err(Error::UnrecognizedFamily(_))));
}
