use std::f64::consts::SQRT_2;

use chill_core::ansatz::*;
use chill_core::math::profile;
use chill_core::math::quadrature::Quadrature;
use chill_core::par::Exec;

const TIMES: [f64; 3] = [1e2, 1e3, 1e4];

fn d1_error(t: f64) -> f64 {
    let p = AnsatzParams::explicit(2, t).unwrap();
    let lead = -12.0 * SQRT_2 * (-SQRT_2 * p.eta(2)).exp();
    let d = Projection::new(&p, 1).unwrap().d();
    ((d - lead) / lead).abs()
}

#[test]
fn d_coefficient_approaches_its_expansion() {
    let e: Vec<f64> = TIMES.iter().map(|&t| d1_error(t)).collect();
    assert!(e[1] <= 0.2);
    assert!(e[0] > e[1] && e[1] > e[2]);
    // remainder of relative size t^{-1/2} ln t
    for w in 0..2 {
        let (ta, tb) = (TIMES[w], TIMES[w + 1]);
        let predicted = (tb / ta).sqrt().recip() * tb.ln() / ta.ln();
        let observed = e[w + 1] / e[w];
        assert!((observed / predicted - 1.0).abs() <= 0.3, "decade {w}: {observed} vs {predicted}");
    }
}

#[test]
fn d_signs_mirror_for_symmetric_clusters() {
    for k in [2usize, 3, 4, 5] {
        let p = AnsatzParams::explicit(k, 1e3).unwrap();
        let d: Vec<f64> = (1..=k).map(|i| Projection::new(&p, i).unwrap().d()).collect();
        let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..k {
            assert!((d[i] + d[k - 1 - i]).abs() <= 1e-10 * scale, "k={k} {d:?}");
        }
    }
}

#[test]
fn projection_is_orthogonal_for_all_times() {
    let q = Quadrature::new(1e-16, 1e-13);
    for &t in &TIMES {
        let p = AnsatzParams::explicit(4, t).unwrap();
        for i in 1..=4 {
            let pr = Projection::new(&p, i).unwrap();
            let v = q.integrate_pieces(|y| pr.i_tilde(y) * profile::d1(y), &pr.breakpoints(), true).unwrap().value;
            assert!(v.abs() <= 1e-9, "t={t} i={i}: {v:e}");
        }
    }
}

fn fitted_constant(samples: impl Iterator<Item = (f64, f64)>) -> f64 {
    samples.map(|(v, bound)| v.abs() / bound).fold(0.0, f64::max)
}

#[test]
fn first_corrector_decays_outside_its_pair() {
    let sigma = 1.0;
    let c: Vec<f64> = TIMES
        .iter()
        .map(|&t| {
            let p = AnsatzParams::explicit(3, t).unwrap();
            let g = p.gamma.gamma();
            let xi = FirstCorrector::new(g[0], g[1]).unwrap();
            fitted_constant((0..200).map(|m| {
                let x = g[0] - 0.1 * m as f64;
                (xi.value(x), t.powf(-0.5) * (-sigma * (x - g[0]).abs()).exp())
            }))
        })
        .collect();
    assert!(c.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!(c[2] <= 2.0 * c[0] && c[0] <= 2.0 * c[2]);
}

#[test]
fn interaction_terms_decay_exponentially() {
    let p = AnsatzParams::explicit(3, 1e3).unwrap();
    for i in 1..=3 {
        let pr = Projection::new(&p, i).unwrap();
        let c = fitted_constant(
            (0..400).map(|m| 5.0 + 0.1 * m as f64).flat_map(|y| [y, -y]).map(|y| (pr.i_tilde(y), (-SQRT_2 * y.abs()).exp())),
        );
        assert!(c.is_finite() && c < 1e3, "i={i}: {c}");
    }
    let p = AnsatzParams::explicit(2, 1e3).unwrap();
    let pr = Projection::new(&p, 1).unwrap();
    assert!((-30..30).all(|m| pr.i_hat_parts(0.3 * m as f64).1 == 0.0));
}

#[test]
fn second_corrector_bound() {
    let c: Vec<f64> = TIMES
        .iter()
        .map(|&t| {
            let p = AnsatzParams::explicit(2, t).unwrap();
            let sc = SecondCorrector::build(&p, 1, Exec::Parallel).unwrap();
            fitted_constant((1..300).map(|m| -15.0 + 0.1 * m as f64).filter(|y: &f64| y.abs() > 0.05).map(|y| {
                (sc.value(y), t.powf(-0.5) * y.abs() * (-SQRT_2 * y.abs()).exp())
            }))
        })
        .collect();
    assert!(c.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!(c[2] <= 3.0 * c[0] && c[0] <= 3.0 * c[2]);
}

#[test]
fn sup_error_decreases_with_time() {
    let sup: Vec<f64> = TIMES
        .iter()
        .map(|&t| {
            let f = ErrorField::new(&Explicit { k: 2 }, t, DEFAULT_SIGMA, DEFAULT_ALPHA, Exec::Parallel).unwrap();
            let grid = norm_grid(&f.ansatz().params().gamma, 15.0, 0.05).unwrap();
            grid.iter().map(|&x| f.eval(x).abs()).fold(0.0, f64::max)
        })
        .collect();
    assert!(sup[0] > sup[1] && sup[1] > sup[2], "{sup:?}");
}

#[test]
fn error_at_an_interface_against_the_weight() {
    let c: Vec<f64> = TIMES
        .iter()
        .map(|&t| {
            let f = ErrorField::new(&Explicit { k: 2 }, t, 1.0, 2.0, Exec::Parallel).unwrap();
            let p = f.ansatz().params();
            let w = Weight::from_params(p);
            let x = p.gamma.at(1);
            f.eval(x).abs() / (t.powf(-1.0 / (16.0 * SQRT_2)) * w.eval(x))
        })
        .collect();
    assert!(c.iter().all(|v| v.is_finite()));
    assert!(c.iter().fold(0.0f64, |m, v| m.max(*v)) <= 2.0 * c.iter().fold(f64::INFINITY, |m, v| m.min(*v)));
}
