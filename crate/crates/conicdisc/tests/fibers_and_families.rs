use std::sync::Arc;

use conicdisc::exactalg::*;
use conicdisc::familyscan::*;
use conicdisc::fiberlab::*;
use conicdisc::localforms::*;
use conicdisc::quadform::*;
use conicdisc::sampling::*;
use conicdisc::Error;
use proptest::prelude::*;

/// Every nonzero form over a small field, by coefficient index.
fn all_forms(f: &Field) -> Vec<TernaryForm<Scalar>> {
    let q = f.order().unwrap();
    let els: Vec<Elem> = f.elements().collect();
    (1..q.pow(6))
        .map(|mut k| {
            TernaryForm::from_array(std::array::from_fn(|_| {
                let e = els[(k % q) as usize].clone();
                k /= q;
                Scalar::new(f, e)
            }))
        })
        .collect()
}

#[test]
fn classification_matches_oracle_exhaustively() {
    for (f, count) in [(Field::prime(2).unwrap(), 63), (Field::prime(3).unwrap(), 728), (Field::galois(2, 2).unwrap(), 4095)] {
        let forms = all_forms(&f);
        assert_eq!(forms.len(), count);
        for q in &forms {
            assert_eq!(classify_fiber(q).unwrap(), oracle_classify(q).unwrap(), "{q} over {}", f.name());
        }
    }
}

#[test]
fn field_normal_forms_round_trip_over_f3() {
    let f = Field::prime(3).unwrap();
    for q in all_forms(&f) {
        let nf = field_normal_form(&q).unwrap();
        assert_eq!(q.act_unchecked(&nf.transform).scale(&nf.unit), nf.canonical);
        let moves = decompose_gl3(&nf.transform).unwrap();
        assert_eq!(product(&moves, &Scalar::one(&f)), nf.transform);
    }
}

fn round_trip(f: &Field, seed: u64) -> std::result::Result<(), TestCaseError> {
    let t: Arc<str> = Arc::from("t");
    let mut r = rng(seed);
    let s = random_bundle(&mut r, f, &t, 32);
    let (res, emb) = normalize_extending(&s.form, 2 * f.degree()).map_err(|e| TestCaseError::fail(format!("{} : {e}", s.tag)))?;
    let q = match &emb {
        Some(e) => embed_series_form(&s.form, e),
        None => s.form.clone(),
    };
    prop_assert_eq!(res.tag, s.tag);
    prop_assert!(res.precision >= 28);
    let back = q.act_unchecked(&res.transform).scale(&res.unit);
    for (g, w) in back.coeffs().iter().zip(res.canonical_form.coeffs()) {
        prop_assert_eq!(g.truncate(28), w.truncate(28));
    }
    prop_assert_eq!(delta(&q).valuation(), Valuation::Finite(res.tag.delta_degree()));
    let rep = classify_surface_singularity(res.tag.delta_degree(), res.tag.central_reduced()).unwrap();
    prop_assert_eq!(rep.m, res.tag.delta_degree() + 1);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_round_trips_finite(seed in any::<u64>()) {
        round_trip(&Field::prime(2).unwrap(), seed)?;
        round_trip(&Field::galois(2, 2).unwrap(), seed)?;
        round_trip(&Field::prime(5).unwrap(), seed)?;
    }

    #[test]
    fn normal_form_round_trips_rational(seed in any::<u64>()) {
        round_trip(&Field::rationals(), seed)?;
    }
}

fn base2() -> Arc<Vec<String>> {
    Arc::new(vec!["u".to_string(), "v".to_string()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A fibre is smooth exactly where δ does not vanish, and a smooth fibre
    /// has no singular point over the base field.
    #[test]
    fn pointwise_discriminant(seed in any::<u64>()) {
        let mut r = rng(seed);
        for f in [Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::galois(2, 2).unwrap()] {
            let form = random_form(&mut r, |r| random_poly(r, &f, &base2(), 2));
            let Ok(fam) = Family::new(form) else { continue };
            let d = discriminant_poly(&fam);
            for u in f.elements() {
                for v in f.elements() {
                    let pt = [Scalar::new(&f, u.clone()), Scalar::new(&f, v)];
                    let fib = fam.fiber_at(&pt);
                    prop_assert_eq!(d.eval(&pt), delta(&fib));
                    if fib.is_zero() {
                        continue;
                    }
                    let smooth = classify_fiber(&fib).unwrap() == FiberType::Smooth;
                    prop_assert_eq!(smooth, !d.eval(&pt).is_zero());
                    prop_assert_eq!(oracle_classify(&fib).unwrap() == FiberType::Smooth, smooth);
                    if smooth {
                        prop_assert!(jacobian_points(&fib).is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn discriminant_is_gl3_covariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = Field::prime(3).unwrap();
        let vars = base2();
        let form = random_form(&mut r, |r| random_poly(r, &f, &vars, 2));
        let Ok(fam) = Family::new(form) else { return Ok(()) };
        let proto = Poly::constant(&f, &vars, f.one());
        let m = random_elementary_product(
            &mut r,
            &proto,
            6,
            |r| random_poly(r, &f, &vars, 1),
            |r| Poly::constant(&f, &vars, random_nonzero_elem(r, &f)),
        );
        let moved = fam.act(&m).unwrap();
        let d = m.det().clone();
        prop_assert_eq!(discriminant_poly(&moved), d.clone() * d * discriminant_poly(&fam));
    }

    #[test]
    fn specialization_commutes_with_delta(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = Field::prime(5).unwrap();
        let vars = base2();
        let form = random_form(&mut r, |r| random_poly(r, &f, &vars, 3));
        let Ok(fam) = Family::new(form) else { return Ok(()) };
        let v = random_scalar(&mut r, &f);
        let s = specialize_to_series(&fam, "u", &[("v", v.clone())], 12).unwrap();
        let d = discriminant_poly(&fam);
        let ds = specialize_to_series(
            &Family { form: TernaryForm::new(d.clone(), d.zero_like(), d.zero_like(), d.zero_like(), d.zero_like(), d.one_like()), ..fam.clone() },
            "u",
            &[("v", v.clone())],
            12,
        )
        .unwrap()
        .a;
        prop_assert_eq!(delta(&s), ds);
        let u = random_scalar(&mut r, &f);
        let pt = [u, v];
        prop_assert_eq!(delta(&fam.fiber_at(&pt)), d.eval(&pt));
    }
}

#[test]
fn scans_report_only_jacobian_points() {
    let f = Field::prime(3).unwrap();
    let vars = base2();
    let p = |s: &str| parse_poly(s, &f, &vars).unwrap();
    let fam = Family::new(TernaryForm::new(p("1"), p("u"), p("v^2 + u"), p("0"), p("0"), p("0"))).unwrap();
    let rep = singular_points_scan(&fam, 1).unwrap();
    for pt in &rep.singular_points {
        let q = fam.fiber_at(&pt.base);
        assert!(q.eval(&pt.fiber).is_zero());
        assert!(q.gradient(&pt.fiber).iter().all(|g| g.is_zero()));
        for j in 0..2 {
            let dq = fam.form.map(|c| c.partial(j).eval(&pt.base));
            assert!(dq.eval(&pt.fiber).is_zero());
        }
    }
    assert_eq!(rep.points_scanned, 9 * 13);
}

#[test]
fn scan_bound() {
    let f = Field::prime(5).unwrap();
    let vars = Arc::new((0..12).map(|i| format!("t{i}")).collect::<Vec<_>>());
    let p = |s: &str| parse_poly(s, &f, &vars).unwrap();
    let fam = Family::new(TernaryForm::new(p("1"), p("t0"), p("t1"), p("0"), p("0"), p("0"))).unwrap();
    assert!(matches!(singular_points_scan(&fam, 1), Err(Error::TooLarge(_))));
    assert!(matches!(nonreg_equals_sigma_check(&fam, 1), Err(Error::TooLarge(_))));
}
