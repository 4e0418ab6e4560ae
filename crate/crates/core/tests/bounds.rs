use wrom::harness::bounds::{forgery_floor, max_load_threshold, salted_scheme_ceiling, simulator_deviation, uniformity_distance};
use wrom::harness::{BoundKind, BoundSizes, Direction};
use wrom::oracle::Params;
use wrom::verification::{abort_rate_experiment, uniformity_probe, ProbeScript};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn forgery_floor_values() {
    assert!(close(forgery_floor::<f64>(8, 8), 0.6306807194059595));
    assert!(close(forgery_floor::<f64>(1, 1), 1.0 - (-0.5f64).exp()));
    // A wide message space makes collisions near certain.
    assert!(forgery_floor::<f64>(16, 8) > 0.999);
    // The exact collision probability dominates the floor.
    for (l, k) in [(4, 4), (8, 8), (8, 10), (12, 8)] {
        let exact = 1.0 - (1.0 - 2f64.powi(-(k as i32))).powi((1 << l) - 1);
        assert!(exact >= forgery_floor::<f64>(l, k), "{l} {k}");
    }
}

#[test]
fn load_threshold_values() {
    let ln = (256f64).ln();
    assert!(close(max_load_threshold::<f64>(8, 8).unwrap(), 5.0 * ln / ln.ln()));
    assert!(close(max_load_threshold::<f64>(10, 8).unwrap(), 4.0 * 5.0 * ln / ln.ln()));
    assert!(close(max_load_threshold::<f64>(8, 8).unwrap(), 16.186247856972894));
    assert!(max_load_threshold::<f64>(8, 1).is_err());
}

#[test]
fn deviation_and_uniformity_values() {
    let (y, q) = (256f64, 32f64);
    let ll = y.ln() / y.ln().ln();
    let dev = ll * 10.0 * q / y + 1.0 / (y * y) + q / y;
    assert!(close(simulator_deviation::<f64>(32, 8, 8).unwrap(), dev));
    let uni = (5.0 * q + 1.0 + 4.0 * q * q / y + 20.0 * q * ll) / y;
    assert!(close(uniformity_distance::<f64>(32, 8, 8).unwrap(), uni));
    // Larger message space than range: #M replaces #Y in the denominators.
    let m = 64f64;
    let dev_small = ll * 10.0 * q / m + 1.0 / (y * y) + q / y;
    assert!(close(simulator_deviation::<f64>(32, 6, 8).unwrap(), dev_small));
}

#[test]
fn salted_ceiling_decreases_in_salt_width() {
    let at = |k1| salted_scheme_ceiling::<f64>(64, 0, 64, 16, 16, k1).unwrap();
    assert!(at(4) > at(8) && at(8) > at(16) && at(16) > at(32));
    let ceiling = salted_scheme_ceiling::<f64>(0, 0, 0, 16, 16, 16).unwrap();
    let ll = 65536f64.ln() / 65536f64.ln().ln();
    let p = ll * 10.0 / 65536.0 + 1.0 / 65536f64.powi(2) + 1.0 / 65536.0;
    assert!(close(ceiling, 2f64.powi(-16) + p));
}

#[test]
fn bound_kinds_round_trip() {
    for b in BoundKind::ALL {
        assert_eq!(b.name().parse::<BoundKind>().unwrap(), b);
    }
    assert_eq!(BoundKind::CollisionForgery.direction(), Direction::Lower);
    assert_eq!(BoundKind::MaxLoad.direction(), Direction::Upper);
    let large = BoundSizes { ell: 8, k: 8, ..Default::default() };
    assert!(close(BoundKind::SecondPreimageForgeryLarge.evaluate::<f64>(&large).unwrap(), 0.3934693402873666));
    assert!(!BoundKind::SecondPreimageForgeryLarge.applies(&BoundSizes { ell: 4, k: 8, ..Default::default() }));
}

#[test]
fn generic_scalar_agrees() {
    let a = forgery_floor::<f32>(8, 8) as f64;
    assert!((a - forgery_floor::<f64>(8, 8)).abs() < 1e-6);
}

#[test]
fn abort_rate_under_a_nonvacuous_bound() {
    // At #Y = 2^16 and q = 32 the deviation bound is far below one.
    let p = Params::new(16, 2, 16).unwrap();
    let r = abort_rate_experiment(p, 16, 8, 20_000, 42).unwrap();
    assert!(r.bound < 0.05, "{}", r.bound);
    assert!(r.rate <= r.bound + 3.0 * r.sigma, "{} vs {}", r.rate, r.bound);
    assert!(r.aborts > 0);
}

#[test]
fn fresh_point_hash_is_near_uniform() {
    let p = Params::new(6, 1, 6).unwrap();
    let quiet = uniformity_probe(ProbeScript::Ignoring { x: 5 }, p, 100_000, 42).unwrap();
    assert!(quiet.delta < 0.02, "{}", quiet.delta);
    let seeking = uniformity_probe(ProbeScript::CollisionSeeking { rounds: 3 }, p, 100_000, 42).unwrap();
    assert!(seeking.delta <= seeking.bound, "{} vs {}", seeking.delta, seeking.bound);
}
