use std::sync::Arc;

use conicdisc::exactalg::*;
use conicdisc::quadform::*;
use conicdisc::sampling::*;
use conicdisc::Error;
use proptest::prelude::*;

/// `σ_ij`, indices from 0 (`x`) to 2 (`z`).
fn sig<R: Ring>(g: &SigmaGens<R>, i: usize, j: usize) -> R {
    match (i.min(j), i.max(j)) {
        (0, 0) => g.s11(),
        (1, 1) => g.s22(),
        (2, 2) => g.s33(),
        (1, 2) => g.s23(),
        (0, 2) => g.s31(),
        _ => g.s12(),
    }
    .clone()
}

fn covariance<R: Ring>(q: &TernaryForm<R>, m: &Mat3<R>) {
    let d = m.det().clone();
    assert_eq!(delta(&q.act_unchecked(m)), d.clone() * d * delta(q));
}

fn shear_identities<R: Ring>(q: &TernaryForm<R>, mu: &R) {
    let s = sigma_generators(q);
    let t = sigma_generators(&q.apply_move(&ElementaryMove::shear(Axis::X, Axis::Z, mu.clone())));
    let two = mu.int_like(2);
    assert_eq!(*t.s11(), s.s11().clone() + two * mu.clone() * s.s31().clone() + mu.clone() * mu.clone() * s.s33().clone());
    assert_eq!(t.s22(), s.s22());
    assert_eq!(t.s33(), s.s33());
    assert_eq!(*t.s12(), s.s12().clone() - mu.clone() * s.s23().clone());
    assert_eq!(t.s23(), s.s23());
    assert_eq!(*t.s31(), s.s31().clone() + mu.clone() * s.s33().clone());
}

fn scale_and_swap<R: Ring>(q: &TernaryForm<R>, lambda: &R) {
    let s = sigma_generators(q);
    for k in 0..3 {
        let t = sigma_generators(&q.apply_move(&ElementaryMove::scale(Axis::from_index(k), lambda.clone())));
        for i in 0..3 {
            for j in i..3 {
                let e = (k != i) as u32 + (k != j) as u32;
                assert_eq!(sig(&t, i, j), lambda.pow(e) * sig(&s, i, j));
            }
        }
        let l = (k + 1) % 3;
        let t = sigma_generators(&q.apply_move(&ElementaryMove::swap(Axis::from_index(k), Axis::from_index(l))));
        let p = |i: usize| if i == k { l } else if i == l { k } else { i };
        for i in 0..3 {
            for j in i..3 {
                assert_eq!(sig(&t, i, j), sig(&s, p(i), p(j)));
            }
        }
    }
}

fn reconstructs<R: Ring>(m: &Mat3<R>) -> bool {
    match decompose_gl3(m) {
        Ok(moves) => {
            assert_eq!(&product(&moves, m.get(0, 0)), m);
            true
        }
        Err(Error::NoUnitPivot) => false,
        Err(e) => panic!("{e}"),
    }
}

fn suite<R: Ring>(seed: u64, mut entry: impl FnMut(&mut SampleRng) -> R, mut unit: impl FnMut(&mut SampleRng) -> R) {
    let mut rng = rng(seed);
    let q = random_form(&mut rng, &mut entry);
    let m = random_matrix(&mut rng, &mut entry);
    covariance(&q, &m);
    let mu = entry(&mut rng);
    shear_identities(&q, &mu);
    let lambda = unit(&mut rng);
    scale_and_swap(&q, &lambda);
    delta_sigma_witness(&q);
    let e = random_elementary_product(&mut rng, &q.a, 5, &mut entry, &mut unit);
    covariance(&q, &e);
    reconstructs(&e);
    if m.is_invertible() {
        assert!(reconstructs(&m), "a unit pivot always exists over a field or local ring");
    }
}

fn field_suite(f: &Field, seed: u64) {
    suite(seed, |r| random_scalar(r, f), |r| Scalar::new(f, random_nonzero_elem(r, f)));
}

fn series_suite(f: &Field, n: usize, seed: u64) {
    let t: Arc<str> = Arc::from("t");
    suite(seed, |r| random_series(r, f, &t, n, n), |r| random_unit_series(r, f, &t, n, n));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rationals(seed in any::<u64>()) {
        field_suite(&Field::rationals(), seed);
    }

    #[test]
    fn prime_fields(seed in any::<u64>()) {
        for p in [2, 3, 5] {
            field_suite(&Field::prime(p).unwrap(), seed);
        }
    }

    #[test]
    fn f4(seed in any::<u64>()) {
        field_suite(&Field::galois(2, 2).unwrap(), seed);
    }

    #[test]
    fn truncated_series(seed in any::<u64>()) {
        series_suite(&Field::prime(2).unwrap(), 32, seed);
        series_suite(&Field::prime(3).unwrap(), 8, seed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomials(seed in any::<u64>()) {
        let f = Field::rationals();
        let vars = Arc::new(vec!["u".to_string(), "v".to_string()]);
        suite(
            seed,
            |r| random_poly(r, &f, &vars, 2),
            |r| Poly::constant(&f, &vars, random_nonzero_elem(r, &f)),
        );
    }

    /// Over a finite field the zero sets of σ(Q) and σ(Q^M) agree point by
    /// point for any invertible M.
    #[test]
    fn sigma_zero_sets(seed in any::<u64>()) {
        let f = Field::prime(3).unwrap();
        let vars = Arc::new(vec!["u".to_string(), "v".to_string()]);
        let mut r = rng(seed);
        let q = random_form(&mut r, |r| random_poly(r, &f, &vars, 2));
        let m = loop {
            let m = random_matrix(&mut r, |r| Poly::constant(&f, &vars, random_elem(r, &f)));
            if m.is_invertible() {
                break m;
            }
        };
        let (s, t) = (sigma_generators(&q), sigma_generators(&q.act_unchecked(&m)));
        for u in f.elements() {
            for v in f.elements() {
                let pt = [Scalar::new(&f, u.clone()), Scalar::new(&f, v)];
                let z = |g: &SigmaGens<Poly>| g.0.iter().all(|p| p.eval(&pt).is_zero());
                prop_assert_eq!(z(&s), z(&t));
            }
        }
    }
}

#[test]
fn witness_over_the_integers() {
    let f = Field::rationals();
    let names = ["a", "b", "c", "alpha", "beta", "gamma"];
    let vars = Arc::new(names.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let q = TernaryForm::from_array(std::array::from_fn(|i| Poly::var(&f, &vars, i)));
    let DeltaWitness(w) = delta_sigma_witness(&q);
    let g = sigma_generators(&q);
    let combo = (0..6).fold(q.a.zero_like(), |acc, i| acc + w[i].clone() * g.0[i].clone());
    assert_eq!(combo, delta(&q));
    assert_eq!(
        delta(&q).to_string(),
        "4*a*b*c - a*alpha^2 - b*beta^2 - c*gamma^2 + alpha*beta*gamma"
    );
}

#[test]
fn decompose_gets_stuck_over_polynomials() {
    // The first column (1 + uv, v, 0) has no unit entry.
    let f = Field::rationals();
    let vars = Arc::new(vec!["u".to_string(), "v".to_string()]);
    let p = |s: &str| parse_poly(s, &f, &vars).unwrap();
    let m = Mat3::identity(&p("1"))
        .apply_move(&ElementaryMove::shear(Axis::X, Axis::Y, p("u")))
        .apply_move(&ElementaryMove::shear(Axis::Y, Axis::X, p("v")));
    assert!(m.is_invertible());
    assert_eq!(decompose_gl3(&m), Err(Error::NoUnitPivot));
}
