use std::f64::consts::PI;

use holecap::asymptotic::{capacity_series, eval_capacity_series, AsymptoticContext, DEFAULT_GUARD};
use holecap::capacity::{condenser_capacity, u_capacity};
use holecap::eigen::{classify_kbar, prediction, Regime};
use holecap::elliptic::{angular_energy, exterior_energy_closed_form, hole_fourier_coefficients};
use holecap::geometry::{make_circle, make_ellipse};
use holecap::harmonic::{log_capacity, r0};
use holecap::spectra::{annulus_eigenvalues, bessel_j, bessel_j_zeros, bessel_y, disk_eigenvalues, DiskMode, Parity};
use holecap::taylor::{HarmonicLeading, Poly2};
use holecap::Point;
use proptest::prelude::*;

fn x1() -> Poly2 {
    Poly2::from_terms(&[(1, 0, 1.0)]).unwrap()
}

#[test]
fn annulus_capacity_matches_log_formula() {
    let outer = make_circle(1.0).unwrap();
    let hole = make_circle(1.0).unwrap();
    for eps in [0.5, 0.1, 1e-3] {
        let c = condenser_capacity(&outer, &hole, eps, 128).unwrap();
        assert!((c - 2.0 * PI / (1.0 / eps).ln()).abs() < 1e-10 * c, "eps={eps}");
    }
}

#[test]
fn ellipse_log_capacity() {
    let e = make_ellipse(3.0, 2.0, 0.4, Point::new(0.3, 0.1)).unwrap();
    let cap = log_capacity(&e, 256).unwrap();
    assert!((cap - 2.5).abs() < 1e-10);
}

#[test]
fn series_vanishing_pattern_for_linear_u() {
    // only c_(n,l) with n >= 2 can appear for u vanishing at the hole center
    let outer = make_ellipse(2.0, 1.5, 0.3, Point::new(0.1, -0.05)).unwrap();
    let hole = make_ellipse(0.6, 0.4, 0.2, Point::zeros()).unwrap();
    let s = capacity_series(&outer, &hole, &x1(), 4, 128).unwrap();
    for l in 0..s.c[0].len() {
        assert!(s.coeff(0, l).abs() < 1e-12);
        assert!(s.coeff(1, l).abs() < 1e-12);
    }
    assert!(s.coeff(2, 0).abs() > 0.1);
}

#[test]
fn xi_two_on_ellipse() {
    let outer = make_circle(10.0).unwrap();
    let hole = make_ellipse(3.0, 2.0, 0.0, Point::zeros()).unwrap();
    let ctx = AsymptoticContext::new(&outer, &hole, 128).unwrap();
    let d = ctx.densities(&x1(), 3).unwrap();
    let lad = ctx.ladder_coefficients(&d, &x1(), 3).unwrap();
    assert!((lad.xi[2] - 6.0 * PI).abs() < 1e-10, "{}", lad.xi[2]);
}

#[test]
fn series_error_slope_increases_with_order() {
    let outer = make_ellipse(1.5, 1.0, 0.0, Point::zeros()).unwrap();
    let hole = make_ellipse(0.75, 0.5, 0.3, Point::zeros()).unwrap();
    let u = Poly2::from_terms(&[(0, 0, 0.5), (1, 0, 1.0), (1, 1, 0.4)]).unwrap();
    let eps = [0.02, 0.01];
    let direct: Vec<f64> = eps.iter().map(|e| u_capacity(&outer, &hole, &u, *e, 192).unwrap()).collect();
    let mut prev = f64::INFINITY;
    for nmax in 1..=3 {
        let s = capacity_series(&outer, &hole, &u, nmax, 192).unwrap();
        let g: Vec<f64> =
            eps.iter().zip(&direct).map(|(e, d)| (eval_capacity_series(&s, *e, DEFAULT_GUARD).unwrap() - d).abs()).collect();
        let slope = (g[0] / g[1]).ln() / 2f64.ln();
        assert!(slope > nmax as f64 + 0.9, "nmax={nmax} slope={slope}");
        assert!(g[1] <= prev * (1.0 + 1e-6));
        prev = g[1];
    }
    // centrally symmetric hole: odd orders drop out
    let s = capacity_series(&outer, &hole, &u, 3, 192).unwrap();
    assert!(s.c[3].iter().all(|c| c.abs() < 1e-10), "{:?}", s.c[3]);
}

#[test]
fn series_refinement_stable() {
    let outer = make_circle(1.0).unwrap();
    let hole = make_ellipse(0.75, 0.5, 0.2, Point::zeros()).unwrap();
    let u = Poly2::from_terms(&[(0, 0, 1.0), (2, 0, -0.3), (0, 1, 0.2)]).unwrap();
    let a = capacity_series(&outer, &hole, &u, 3, 128).unwrap();
    let b = capacity_series(&outer, &hole, &u, 3, 256).unwrap();
    for (ra, rb) in a.c.iter().zip(&b.c) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() <= 1e-7 * (1.0 + y.abs()));
        }
    }
}

#[test]
fn r0_translation_of_disk() {
    // concentric circles: r0 = -ln(R)/2π
    let r = r0(&make_circle(3.0).unwrap(), &make_circle(1.0).unwrap(), 128).unwrap();
    assert!((r + 3f64.ln() / (2.0 * PI)).abs() < 1e-11);
}

#[test]
fn bessel_oracles() {
    assert!((bessel_j(0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-13);
    assert!((bessel_j(1, 2.5).unwrap() - 0.497_094_102_464_274_4).abs() < 1e-12);
    assert!((bessel_y(0, 1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-11);
    assert!((bessel_y(1, 1.0).unwrap() + 0.781_212_821_300_288_7).abs() < 1e-11);
    let z = bessel_j_zeros(0, 3).unwrap();
    for (a, b) in z.iter().zip([2.404_825_557_695_773, 5.520_078_110_286_311, 8.653_727_912_911_012]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn disk_spectrum_ordering_and_multiplicity() {
    let modes = disk_eigenvalues(1.0, 10).unwrap();
    assert!(modes.windows(2).all(|w| w[0].lambda <= w[1].lambda));
    assert!((modes[0].lambda - 2.404_825_557_695_773f64.powi(2)).abs() < 1e-10);
    assert!(modes[0].is_simple() && !modes[1].is_simple());
}

#[test]
fn annulus_converges_to_disk() {
    let m = DiskMode::new(1, 1, 1.0, Parity::Cos).unwrap();
    let a = annulus_eigenvalues(1e-4, 1, 1).unwrap()[0];
    assert!(a > m.lambda && a - m.lambda < 1e-6);
}

#[test]
fn prediction_regimes() {
    let disk = make_circle(1.0).unwrap();
    let m0 = DiskMode::new(0, 1, 1.0, Parity::Cos).unwrap();
    let u0 = holecap::spectra::disk_eigenfunction_taylor(&m0, Point::zeros(), 6).unwrap();
    let p = prediction(m0.lambda, &u0, Point::zeros(), &disk, 64).unwrap();
    assert_eq!(p.regime, Regime::Log);
    assert!(p.shift(1e-3).unwrap() > 0.0);
    let m2 = DiskMode::new(2, 1, 1.0, Parity::Sin).unwrap();
    let u2 = holecap::spectra::disk_eigenfunction_taylor(&m2, Point::zeros(), 6).unwrap();
    assert_eq!(classify_kbar(&u2).unwrap(), 2);
    let p2 = prediction(m2.lambda, &u2, Point::zeros(), &disk, 64).unwrap();
    let r = p2.shift(1e-2).unwrap() / p2.shift(2e-2).unwrap();
    assert!((r - 1.0 / 16.0).abs() < 1e-12);
}

#[test]
fn elliptic_forms_agree() {
    for k in 1..=4 {
        let h = hole_fourier_coefficients(k, 1.2, 0.3, 0.75, 0.5).unwrap();
        let c = exterior_energy_closed_form(k, 1.2, 0.3, 0.75, 0.5).unwrap();
        assert!((h.exterior_energy - c).abs() < 1e-10 * c.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn angular_energy_symmetries(k in 1usize..5, beta in 0.1f64..3.0, phi in -3.0f64..3.0, b in 0.2f64..1.0) {
        let a = 1.0;
        let e = angular_energy(k, beta, phi, a, b);
        prop_assert!(e > 0.0);
        // period π/k in φ and quadratic in β
        prop_assert!((angular_energy(k, beta, phi + PI / k as f64, a, b) - e).abs() < 1e-9 * e);
        prop_assert!((angular_energy(k, 2.0 * beta, phi, a, b) - 4.0 * e).abs() < 1e-9 * e);
    }

    #[test]
    fn circle_energy_is_rotation_free(k in 1usize..4, phi in -3.0f64..3.0, r in 0.2f64..2.0) {
        let e = angular_energy(k, 1.0, phi, r, r);
        let want = 2.0 * PI * k as f64 * r.powi(2 * k as i32);
        prop_assert!((e - want).abs() < 1e-10 * want);
    }

    #[test]
    fn leading_poly_roundtrip(k in 1usize..5, beta in 0.1f64..3.0, phi in -1.5f64..1.5) {
        let p = HarmonicLeading { k, beta, phi }.to_poly();
        prop_assert!(p.laplacian().max_abs_coeff() < 1e-10 * beta.max(1.0));
        let h = holecap::taylor::beta_phi(&p, k).unwrap();
        prop_assert!((h.beta.abs() - beta).abs() < 1e-10 * beta.max(1.0));
        let back = h.to_poly().add(&p.scale(-1.0));
        prop_assert!(back.max_abs_coeff() < 1e-10 * beta.max(1.0));
    }

    #[test]
    fn capacity_monotone_in_eps(e1 in 0.01f64..0.3, f in 1.1f64..2.0) {
        let outer = make_circle(1.0).unwrap();
        let hole = make_ellipse(0.8, 0.5, 0.1, Point::zeros()).unwrap();
        let a = condenser_capacity(&outer, &hole, e1, 64).unwrap();
        let b = condenser_capacity(&outer, &hole, (e1 * f).min(0.6), 64).unwrap();
        prop_assert!(b > a && a > 0.0);
    }
}
