use std::sync::Arc;

use conicdisc::exactalg::*;
use conicdisc::sampling::*;
use conicdisc::Error;
use proptest::prelude::*;

fn t() -> Arc<str> {
    Arc::from("t")
}

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::prime(2).unwrap(),
        Field::prime(3).unwrap(),
        Field::prime(5).unwrap(),
        Field::galois(2, 2).unwrap(),
        Field::galois(3, 2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_of_units(seed in any::<u64>()) {
        let mut r = rng(seed);
        for f in fields() {
            let u = random_unit_series(&mut r, &f, &t(), 16, 16);
            let v = series_invert(&u).unwrap();
            prop_assert!((u * v).is_one());
            let nonunit = random_series(&mut r, &f, &t(), 16, 16).shift_up(1);
            prop_assert_eq!(series_invert(&nonunit), Err(Error::NotAUnit));
        }
    }

    #[test]
    fn square_roots(seed in any::<u64>()) {
        let mut r = rng(seed);
        for f in fields().into_iter().filter(|f| f.characteristic() != 2) {
            let s = random_unit_series(&mut r, &f, &t(), 16, 16);
            let u = s.clone() * s.clone();
            let root = hensel_sqrt(&u).unwrap();
            prop_assert_eq!(root.clone() * root.clone(), u.clone());
            prop_assert!(root == s || root == -s);
            // A nonsquare residue is reported, never papered over.
            let w = random_unit_series(&mut r, &f, &t(), 16, 16);
            match hensel_sqrt(&w) {
                Ok(x) => prop_assert_eq!(x.clone() * x, w),
                Err(e) => {
                    prop_assert!(matches!(e, Error::NoResidueRoot(_)));
                    prop_assert!(w.constant_term().sqrt().is_none());
                }
            }
        }
    }

    #[test]
    fn quadratic_factorization(seed in any::<u64>()) {
        let mut r = rng(seed);
        for f in [Field::prime(2).unwrap(), Field::galois(2, 2).unwrap(), Field::galois(2, 3).unwrap()] {
            let b = random_unit_series(&mut r, &f, &t(), 16, 16);
            let c = random_series(&mut r, &f, &t(), 16, 16);
            match hensel_factor_quadratic(&b, &c) {
                Ok((d, e)) => {
                    prop_assert!((b.clone() * (d.clone() + e.clone())).is_one());
                    prop_assert_eq!(b * d * e, c);
                }
                Err(err) => {
                    prop_assert!(matches!(err, Error::NoResidueRoot(_)));
                    let roots = f
                        .elements()
                        .map(|y| Scalar::new(&f, y))
                        .filter(|y| {
                            (b.constant_term() * y.clone() * y.clone() + y.clone() + c.constant_term()).is_zero()
                        })
                        .count();
                    prop_assert_eq!(roots, 0);
                }
            }
        }
    }

    #[test]
    fn pth_roots(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = Arc::new(vec!["u".to_string(), "v".to_string()]);
        for f in fields().into_iter().filter(|f| f.is_finite()) {
            let p = f.characteristic() as u32;
            let g = random_poly(&mut r, &f, &vars, 3);
            let gp = g.pow(p);
            prop_assert_eq!(poly_pth_root(&gp), Some(g));
            let h = random_poly(&mut r, &f, &vars, 3);
            if let Some(k) = poly_pth_root(&h) {
                prop_assert_eq!(k.pow(p), h);
            }
        }
    }
}

#[test]
fn pth_root_rejections() {
    let f2 = Field::prime(2).unwrap();
    let vars = Arc::new(vec!["u".to_string()]);
    assert_eq!(poly_pth_root(&parse_poly("u^3", &f2, &vars).unwrap()), None);
    assert_eq!(poly_pth_root(&parse_poly("u^2", &Field::rationals(), &vars).unwrap()), None);
}
