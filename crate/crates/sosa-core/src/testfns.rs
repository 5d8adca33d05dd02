//! Synthetic benchmark suite: Ackley, Rastrigin, Levy, Keane, Michalewicz
//! and the randomly generated Schoen family.
//!
//! Domains follow the benchmark convention for this suite; where an exact
//! global minimum is known it is stored on the [`Objective`], otherwise
//! `known_minimum` is `None` and the literature value is only a bound.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Hypercube, Objective};
use crate::error::{Error, Result};
use crate::linalg::sq_dist;

/// Number of stationary points in a generated Schoen instance.
const SCHOEN_POINTS: usize = 50;
/// Distance exponent of the Schoen rational interpolant.
const SCHOEN_ALPHA: f64 = 3.0;

/// Builds a named test objective in dimension `d`.
///
/// `seed` parametrizes the Schoen instance only; the other functions are
/// fixed closed forms.
pub fn make_test_function(name: &str, d: usize, seed: u64) -> Result<Objective> {
    if d < 2 {
        return Err(Error::InvalidConfig(String::from(
            "test functions require d >= 2",
        )));
    }
    match name {
        "ackley" => ackley(d),
        "rastrigin" => rastrigin(d),
        "levy" => levy(d),
        "keane" => keane(d),
        "michalewicz" => michalewicz(d),
        "schoen" => schoen(d, seed),
        other => Err(Error::InvalidConfig(alloc::format!(
            "unknown test function '{other}'"
        ))),
    }
}

/// Ackley on `[-15,20]^d`; global minimum `-20 - e` at the origin.
///
/// This variant carries no `+20+e` offset, so the minimum value matches
/// the benchmark table entry directly.
fn ackley(d: usize) -> Result<Objective> {
    let domain = Hypercube::uniform(d, -15.0, 20.0)?;
    let inv_d = 1.0 / d as f64;
    Ok(Objective::new("ackley", domain, Some(-20.0 - E), move |x| {
        let mean_sq: f64 = x.iter().map(|v| v * v).sum::<f64>() * inv_d;
        let mean_cos: f64 = x.iter().map(|v| libm::cos(2.0 * PI * v)).sum::<f64>() * inv_d;
        -20.0 * libm::exp(-0.2 * libm::sqrt(mean_sq)) - libm::exp(mean_cos)
    }))
}

/// Rastrigin on `[4,5]^d`, shifted to the domain center so the global
/// minimum `-d` sits at `(4.5, ..., 4.5)`.
fn rastrigin(d: usize) -> Result<Objective> {
    let domain = Hypercube::uniform(d, 4.0, 5.0)?;
    let shift = 4.5;
    Ok(Objective::new(
        "rastrigin",
        domain,
        Some(-(d as f64)),
        move |x| {
            x.iter()
                .map(|&v| {
                    let u = v - shift;
                    u * u - libm::cos(2.0 * PI * u)
                })
                .sum()
        },
    ))
}

/// Levy on `[-5,5]^d` in the standard `w = 1 + (x-1)/4` form.
///
/// The benchmark table only bounds its minimum, so none is configured.
fn levy(d: usize) -> Result<Objective> {
    let domain = Hypercube::uniform(d, -5.0, 5.0)?;
    Ok(Objective::new("levy", domain, None, move |x| {
        let w = |v: f64| 1.0 + (v - 1.0) / 4.0;
        let w1 = w(x[0]);
        let s0 = libm::sin(PI * w1);
        let mut total = s0 * s0;
        for &v in &x[..x.len() - 1] {
            let wi = w(v);
            let s = libm::sin(PI * wi + 1.0);
            total += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
        }
        let wd = w(x[x.len() - 1]);
        let s = libm::sin(2.0 * PI * wd);
        total + (wd - 1.0) * (wd - 1.0) * (1.0 + s * s)
    }))
}

/// Keane's bump function on `[1,10]^d` (minimization form).
fn keane(d: usize) -> Result<Objective> {
    let domain = Hypercube::uniform(d, 1.0, 10.0)?;
    Ok(Objective::new("keane", domain, None, move |x| {
        let mut sum_cos4 = 0.0;
        let mut prod_cos2 = 1.0;
        let mut weighted_sq = 0.0;
        for (i, &v) in x.iter().enumerate() {
            let c = libm::cos(v);
            let c2 = c * c;
            sum_cos4 += c2 * c2;
            prod_cos2 *= c2;
            weighted_sq += (i + 1) as f64 * v * v;
        }
        -libm::fabs(sum_cos4 - 2.0 * prod_cos2) / libm::sqrt(weighted_sq)
    }))
}

/// Michalewicz on `[0,pi]^d` with steepness `m = 10`.
fn michalewicz(d: usize) -> Result<Objective> {
    let domain = Hypercube::uniform(d, 0.0, PI)?;
    Ok(Objective::new("michalewicz", domain, None, move |x| {
        -x.iter()
            .enumerate()
            .map(|(i, &v)| {
                let s = libm::sin((i + 1) as f64 * v * v / PI);
                libm::sin(v) * libm::pow(s, 20.0)
            })
            .sum::<f64>()
    }))
}

/// Randomly generated Schoen instance on `[0,1]^d`.
///
/// `f(x)` is a convex combination of the stationary values, so the global
/// minimum is exactly `min(values)` and is attained at the matching
/// stationary point.
fn schoen(d: usize, seed: u64) -> Result<Objective> {
    let domain = Hypercube::uniform(d, 0.0, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(SCHOEN_POINTS * d);
    for _ in 0..SCHOEN_POINTS * d {
        points.push(rng.gen::<f64>());
    }
    let values: Vec<f64> = (0..SCHOEN_POINTS)
        .map(|_| -100.0 * rng.gen::<f64>())
        .collect();
    let minimum = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Objective::new(
        "schoen",
        domain,
        Some(minimum),
        move |x| schoen_eval(x, &points, &values, d),
    ))
}

/// Rational Schoen interpolant evaluated in log space so the products of
/// `k - 1` distance powers cannot overflow or underflow.
fn schoen_eval(x: &[f64], points: &[f64], values: &[f64], d: usize) -> f64 {
    let k = values.len();
    let mut log_d = Vec::with_capacity(k);
    for j in 0..k {
        let sq = sq_dist(x, &points[j * d..(j + 1) * d]);
        if sq == 0.0 {
            return values[j];
        }
        log_d.push(0.5 * libm::log(sq));
    }
    let total: f64 = log_d.iter().sum();
    let mut max_log = f64::NEG_INFINITY;
    for &ld in &log_d {
        let lw = SCHOEN_ALPHA * (total - ld);
        if lw > max_log {
            max_log = lw;
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &ld) in log_d.iter().enumerate() {
        let w = libm::exp(SCHOEN_ALPHA * (total - ld) - max_log);
        num += values[j] * w;
        den += w;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ackley_minimum_at_origin() {
        let f = make_test_function("ackley", 30, 0).unwrap();
        let v = f.evaluate_raw(&vec![0.0; 30]).unwrap();
        assert!((v - (-20.0 - E)).abs() < 1e-10);
        assert_eq!(f.known_minimum(), Some(-20.0 - E));
    }

    #[test]
    fn rastrigin_minimum_at_center() {
        let f = make_test_function("rastrigin", 30, 0).unwrap();
        let v = f.evaluate_raw(&vec![4.5; 30]).unwrap();
        assert!((v - (-30.0)).abs() < 1e-12);
    }

    #[test]
    fn levy_standard_minimum_point() {
        // w-transform places the standard minimum (value 0) at x = 1.
        let f = make_test_function("levy", 5, 0).unwrap();
        let v = f.evaluate_raw(&vec![1.0; 5]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn evaluation_is_deterministic() {
        for name in ["ackley", "rastrigin", "levy", "keane", "michalewicz", "schoen"] {
            let f = make_test_function(name, 6, 7).unwrap();
            let x: Vec<f64> = f
                .domain()
                .lower()
                .iter()
                .zip(f.domain().upper())
                .map(|(&a, &b)| a + 0.37 * (b - a))
                .collect();
            assert_eq!(
                f.evaluate_raw(&x).unwrap(),
                f.evaluate_raw(&x).unwrap(),
                "{name} not deterministic"
            );
        }
    }

    #[test]
    fn unknown_name_is_config_error() {
        assert!(matches!(
            make_test_function("rosenbrock", 5, 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn schoen_interpolates_and_respects_minimum() {
        let seed = 11;
        let d = 8;
        // Rebuild the instance's stationary set exactly as `schoen` does.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::new();
        for _ in 0..SCHOEN_POINTS * d {
            points.push(rng.gen::<f64>());
        }
        let values: Vec<f64> = (0..SCHOEN_POINTS)
            .map(|_| -100.0 * rng.gen::<f64>())
            .collect();

        let f = make_test_function("schoen", d, seed).unwrap();
        for j in [0, 13, SCHOEN_POINTS - 1] {
            let z = &points[j * d..(j + 1) * d];
            let v = f.evaluate_raw(z).unwrap();
            assert!(
                (v - values[j]).abs() < 1e-9,
                "interpolation failed at point {j}: {v} vs {}",
                values[j]
            );
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(f.known_minimum(), Some(min));
        // Convex combination: no point can beat the smallest stationary value.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
            assert!(f.evaluate_raw(&x).unwrap() >= min - 1e-9);
        }
    }

    #[test]
    fn schoen_seed_changes_instance() {
        let a = make_test_function("schoen", 5, 1).unwrap();
        let b = make_test_function("schoen", 5, 2).unwrap();
        let x = vec![0.5; 5];
        assert_ne!(a.evaluate_raw(&x).unwrap(), b.evaluate_raw(&x).unwrap());
    }
}
