use std::hint::black_box;

use convexproj::benzecri::benzecri_chart;
use convexproj::body::convex_hull;
use convexproj::charfn::{chi_eval, triangulate_dual};
use convexproj::cone::PolyCone;
use convexproj::cusps::{build_cusp_domain, orbit_certificate, translation_group, CuspFamily, OrbitGrid};
use convexproj::linalg::{mat_exp, LieElement, ProjPoint, Vector};
use convexproj::sampling::{in_ball, seeded_rng};
use criterion::{criterion_group, criterion_main, Criterion};

fn exp(c: &mut Criterion) {
    let x = LieElement::from_rows(&[
        vec![0.3, 1.0, 0.0, -0.2],
        vec![0.0, 0.1, 0.5, 0.0],
        vec![0.2, 0.0, -0.4, 2.0],
        vec![0.0, 0.1, 0.0, 0.0],
    ])
    .unwrap();
    let (a, _) = CuspFamily::C0.lie_generators().unwrap();
    c.bench_function("mat_exp/dense", |b| b.iter(|| mat_exp(black_box(&x)).unwrap()));
    c.bench_function("mat_exp/nilpotent", |b| b.iter(|| mat_exp(black_box(&a)).unwrap()));
}

fn chi(c: &mut Criterion) {
    let mut rng = seeded_rng(5);
    let gens: Vec<Vector> = (0..9).map(|_| in_ball(&mut rng, 3, 0.8).insert_row(3, 1.0)).collect();
    let t = triangulate_dual(&PolyCone::from_generators(&gens).unwrap()).unwrap();
    let x = Vector::from_vec(vec![0.0, 0.0, 0.0, 1.0]);
    c.bench_function("chi_eval/4d", |b| b.iter(|| chi_eval(&t, black_box(&x)).unwrap()));
}

fn benzecri(c: &mut Criterion) {
    let mut rng = seeded_rng(7);
    for n in [2usize, 3] {
        let pts: Vec<Vector> = (0..12).map(|_| in_ball(&mut rng, n, 1.0)).collect();
        let body = convex_hull(&pts).unwrap();
        let p = body.vertex_centroid();
        c.bench_function(&format!("benzecri_chart/dim{n}"), |b| {
            b.iter(|| benzecri_chart(&body, black_box(&p)).unwrap())
        });
    }
}

fn cusps(c: &mut Criterion) {
    let rep = CuspFamily::C3 { alpha: 1.0, beta: 2.0 }.lattice().unwrap();
    let t = translation_group(&rep).unwrap();
    let x = ProjPoint::from_slice(&[1.0; 4]).unwrap();
    c.bench_function("orbit_certificate/C3", |b| b.iter(|| orbit_certificate(&t, black_box(&x)).unwrap()));
    let mut g = c.benchmark_group("cusp_domain");
    g.sample_size(10);
    g.bench_function("C3/grid21", |b| {
        b.iter(|| build_cusp_domain(&rep, black_box(&x), &OrbitGrid::default()).unwrap())
    });
    g.finish();
}

criterion_group!(kernels, exp, chi, benzecri, cusps);
criterion_main!(kernels);
