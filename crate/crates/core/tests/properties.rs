use convexproj::body::{convex_hull, hausdorff_bodies, hilbert_distance, Ball, ConvexBody};
use convexproj::charfn::{chi_eval, triangulate_dual};
use convexproj::cone::{same_rays, PolyCone};
use convexproj::cusps::{
    cusp_generator, orbit_certificate, translation_group, CuspFamily, TranslationGroup,
};
use convexproj::io::{from_json, to_json, PointsJson};
use convexproj::linalg::{
    act_projective, eigenvalues, exp_nilpotent, exp_pade, mat_exp, mat_log_e, LieElement, Matrix,
    ProjMatrix, ProjPoint, Vector,
};
use convexproj::minnorm::distance_to_hull;
use convexproj::sampling::{in_ball, seeded_rng, Rng};
use convexproj::smoothing::{build_cap, m_kappa, relative_smooth, secant_gap, ConvexFn, Region};
use proptest::prelude::*;
use rand::RngExt;

fn entries(n: usize, scale: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-scale..scale, n * n).prop_map(move |v| Matrix::from_row_slice(n, n, &v))
}

fn polytope(rng: &mut Rng, n: usize) -> ConvexBody {
    loop {
        let pts: Vec<Vector> = (0..n + 3 + rng.random_range(0..5)).map(|_| in_ball(rng, n, 1.0)).collect();
        if let Ok(b) = convex_hull(&pts) {
            if !b.is_degenerate() {
                return b;
            }
        }
    }
}

fn interior(rng: &mut Rng, pts: &[Vector]) -> Vector {
    let w: Vec<f64> = pts.iter().map(|_| 0.1 + rng.random::<f64>()).collect();
    let tot: f64 = w.iter().sum();
    pts.iter().zip(&w).map(|(p, wi)| p * (wi / tot)).sum()
}

fn random_cone(seed: u64, n: usize) -> PolyCone {
    let mut rng = seeded_rng(seed);
    loop {
        let gens: Vec<Vector> = (0..n + rng.random_range(0..3))
            .map(|_| in_ball(&mut rng, n - 1, 0.8).insert_row(n - 1, 1.0))
            .collect();
        if let Ok(c) = PolyCone::from_generators(&gens) {
            return c;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_inverts_exp_on_triangular(m in entries(4, 1.0)) {
        let x = m.upper_triangle();
        let g = mat_exp(&LieElement::new(x.clone()).unwrap()).unwrap();
        let back = mat_log_e(&g).unwrap();
        prop_assert!((back.as_matrix() - &x).norm() <= 1e-8 * (1.0 + x.norm()));
    }

    #[test]
    fn nilpotent_series_matches_pade(m in entries(4, 2.0)) {
        let x = m.upper_triangle() - Matrix::from_diagonal(&m.diagonal());
        let a = exp_nilpotent(&x);
        let b = exp_pade(&x);
        prop_assert!((&a - &b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn spectrum_is_similarity_invariant(m in entries(4, 1.0), p in entries(4, 0.3)) {
        let mut t = m.upper_triangle();
        for i in 0..4 {
            t[(i, i)] = i as f64 + 0.5 * m[(i, i)];
        }
        let p = Matrix::identity(4, 4) + p;
        let Some(inv) = p.clone().try_inverse() else { return Ok(()) };
        let sorted = |mut v: Vec<f64>| { v.sort_by(f64::total_cmp); v };
        let a = sorted(eigenvalues(&t).iter().map(|z| z.re).collect());
        let b = sorted(eigenvalues(&(&p * &t * inv)).iter().map(|z| z.re).collect());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn projective_action_composes(a in entries(4, 0.4), b in entries(4, 0.4), x in prop::collection::vec(0.1..2.0f64, 4)) {
        let a = ProjMatrix::new(Matrix::identity(4, 4) + a).unwrap();
        let b = ProjMatrix::new(Matrix::identity(4, 4) + b).unwrap();
        let x = ProjPoint::from_slice(&x).unwrap();
        let (Ok(ab), Ok(bx)) = (act_projective(&a.compose(&b), &x), act_projective(&b, &x)) else { return Ok(()) };
        let a_bx = act_projective(&a, &bx).unwrap();
        prop_assert!(ab.same_point(&a_bx, 1e-9));
    }

    #[test]
    fn cone_duality_is_an_involution(seed in any::<u64>(), n in 3usize..=5) {
        let c = random_cone(seed, n);
        let d = PolyCone::from_generators(c.normals()).unwrap();
        prop_assert!(same_rays(d.generators(), c.normals(), 1e-7));
        prop_assert!(same_rays(d.normals(), c.generators(), 1e-7));
        for g in c.generators() {
            for psi in c.normals() {
                prop_assert!(psi.dot(g) >= -1e-9 * g.norm());
            }
        }
    }

    #[test]
    fn hilbert_distance_is_a_metric(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let body = polytope(&mut rng, n);
        let ball = Ball { center: Vector::zeros(n), radius: 1.0 };
        let [a, b, c] = [0, 1, 2].map(|_| interior(&mut rng, body.vertices()));
        for d in [
            &|p: &Vector, q: &Vector| hilbert_distance(&body, p, q).unwrap(),
            &|p: &Vector, q: &Vector| hilbert_distance(&ball, p, q).unwrap(),
        ] as [&dyn Fn(&Vector, &Vector) -> f64; 2] {
            let (ab, bc, ac) = (d(&a, &b), d(&b, &c), d(&a, &c));
            prop_assert!(ac <= ab + bc + 1e-12 * (1.0 + ac));
            prop_assert!((ab - d(&b, &a)).abs() <= 1e-12 * (1.0 + ab));
            prop_assert!(d(&a, &a) == 0.0);
        }
    }

    #[test]
    fn polytope_hausdorff_matches_brute_force(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let a = polytope(&mut rng, n);
        let b = polytope(&mut rng, n);
        let brute = |f: &ConvexBody, t: &ConvexBody| {
            f.vertices().iter().map(|v| distance_to_hull(v, t.vertices())).fold(0.0, f64::max)
        };
        let exact = brute(&a, &b).max(brute(&b, &a));
        prop_assert!((hausdorff_bodies(&a, &b).unwrap() - exact).abs() <= 1e-9);
    }

    #[test]
    fn log_characteristic_function_is_strictly_convex(seed in any::<u64>(), n in 3usize..=5) {
        let c = random_cone(seed, n);
        let t = triangulate_dual(&c).unwrap();
        let mut rng = seeded_rng(seed ^ 1);
        let x = interior(&mut rng, c.generators());
        let e = chi_eval(&t, &x).unwrap();
        // Rounding in the pairings grows with the conditioning near the boundary.
        let eps = 64.0 * f64::EPSILON;
        prop_assert!((e.grad_c.dot(&x) + 1.0).abs() <= 1e-9 + eps * x.norm() * e.grad_c.norm());
        prop_assert!((x.dot(&(&e.hess_c * &x)) - 1.0).abs() <= 1e-9 + eps * x.norm_squared() * e.hess_c.norm());
        prop_assert!(e.hess_c.clone().symmetric_eigenvalues().min() > 0.0);
    }

    #[test]
    fn cap_combination_properties(x in 1e-3..1e3f64, y in 1e-3..1e3f64, t in 0.01..100.0f64, kappa in 0.05..0.95f64) {
        let cap = build_cap(kappa).unwrap();
        let m = |a, b| m_kappa(&cap, a, b).unwrap();
        let v = m(x, y);
        prop_assert!(v <= x.min(y) * (1.0 + 1e-12) && v > 0.0);
        prop_assert!((m(y, x) - v).abs() <= 1e-12 * v);
        prop_assert!((m(t * x, t * y) - t * v).abs() <= 1e-12 * t * v);
        prop_assert!(m(x * 1.01, y) >= v * (1.0 - 1e-12));
    }

    #[test]
    fn relative_smoothing_is_convex(seed in any::<u64>(), kappa in 0.1..0.9f64, half in 0.1..0.6f64) {
        let cap = build_cap(kappa).unwrap();
        let ball = Ball { center: Vector::zeros(2), radius: 1.0 };
        let inner = ConvexBody::cube(2, half).unwrap();
        let f = ConvexFn::new(2, |x| x.norm_squared() - 1.0)
            .with_gradient(|x| x * 2.0)
            .with_hessian(|x| Matrix::identity(x.len(), x.len()) * 2.0);
        let s = relative_smooth(f, &cap, &ball, &inner, seed).unwrap();
        let mut rng = seeded_rng(seed);
        for _ in 0..50 {
            let (a, b) = (ball.sample(&mut rng), ball.sample(&mut rng));
            prop_assert!(secant_gap(&s, &a, &b, rng.random()) <= 1e-9);
        }
    }

    #[test]
    fn cusp_groups_are_homomorphisms(s1 in -2.0..2.0f64, t1 in -2.0..2.0f64, s2 in -2.0..2.0f64, t2 in -2.0..2.0f64, alpha in 0.1..3.0f64, gap in 0.0..3.0f64) {
        for fam in [CuspFamily::C0, CuspFamily::C1, CuspFamily::C2 { alpha }, CuspFamily::C3 { alpha, beta: alpha + gap }] {
            let g = |s, t| cusp_generator(&fam, s, t).unwrap().into_matrix();
            let rhs = g(s1 + s2, t1 + t2);
            prop_assert!((g(s1, t1) * g(s2, t2) - &rhs).norm() <= 1e-10 * rhs.norm());
        }
    }

    #[test]
    fn certificate_verdict_ignores_basis_choice(m in entries(2, 1.0), alpha in 0.2..2.0f64, gap in 0.0..2.0f64) {
        let m = Matrix::identity(2, 2) + m;
        prop_assume!(m.determinant().abs() > 0.1);
        let fam = CuspFamily::C3 { alpha, beta: alpha + gap };
        let x = ProjPoint::from_slice(&[1.0; 4]).unwrap();
        let t = translation_group(&fam.lattice().unwrap()).unwrap();
        let base = orbit_certificate(&t, &x).unwrap();
        let b = t.lie_basis();
        let mixed: Vec<LieElement> = (0..2)
            .map(|i| b[0].scale(m[(i, 0)]).add(&b[1].scale(m[(i, 1)])))
            .collect();
        let other = orbit_certificate(&TranslationGroup::from_basis(mixed).unwrap(), &x).unwrap();
        prop_assert_eq!(base.verdict, other.verdict);
        // Q transforms by congruence, so the determinant scales by det(M)^2.
        let ratio = other.q.determinant() / base.q.determinant();
        prop_assert!((ratio / m.determinant().powi(2) - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn json_floats_round_trip_bit_exactly(pts in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 3), 1..8)) {
        let text = to_json(&PointsJson::Bare(pts.clone()));
        let back: PointsJson = from_json(&text).unwrap();
        for (p, q) in pts.iter().zip(back.points()) {
            for (a, b) in p.iter().zip(q) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
