use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_sched::error::Error;
use tropical_sched::linalg::{Matrix, Vector};
use tropical_sched::optimizer::{self, ProblemSpec};
use tropical_sched::oracle::{brute_force_min, feasible, objective, GridSpec};
use tropical_sched::semifield::{MaxPlus, Scalar};

type Sc = Scalar<MaxPlus>;

fn entry(rng: &mut ChaCha8Rng) -> Sc {
    if rng.gen_bool(0.3) {
        Sc::zero()
    } else {
        Sc::finite(rng.gen_range(-4..=4) as f64)
    }
}

fn instance(rng: &mut ChaCha8Rng) -> ProblemSpec<MaxPlus> {
    let n = rng.gen_range(1..=3);
    let mut mat = |rows, cols| Matrix::from_fn(rows, cols, |_, _| entry(rng));
    let (a, b, c) = (mat(n, n), mat(n, n), mat(n, n));
    let g = Vector::new((0..n).map(|_| entry(rng)).collect()).unwrap();
    let h = Vector::new((0..n).map(|_| Sc::finite(rng.gen_range(0..=8) as f64)).collect()).unwrap();
    ProblemSpec::new(a, b, c, g, h).unwrap()
}

#[test]
fn integer_solutions_match_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..400 {
        let spec = instance(&mut rng);
        let Ok(opt) = optimizer::solve(&spec) else { continue };
        let Some(theta) = opt.theta.value().filter(|t| t.fract() == 0.0) else { continue };
        let grid = GridSpec::default_for(&spec, 1.0).unwrap();
        let (value, arg) = brute_force_min(&spec, &grid).unwrap();
        assert_eq!(value, Sc::finite(theta));
        assert!(feasible(&spec, &arg));
        assert_eq!(objective(&spec.objective, &arg).unwrap(), value);
        // the lowest member of the family is feasible and optimal too
        let x = opt.solutions.lowest_point();
        if x.is_regular() {
            assert!(feasible(&spec, &x));
            assert_eq!(objective(&spec.objective, &x).unwrap(), value);
        }
        compared += 1;
    }
    assert!(compared >= 30, "only {compared} instances compared");
}

#[test]
fn halving_the_step_never_raises_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut compared = 0;
    for _ in 0..300 {
        let spec = instance(&mut rng);
        let Ok(grid) = GridSpec::default_for(&spec, 1.0) else { continue };
        if grid.point_count() > 20_000.0 {
            continue;
        }
        let coarse = brute_force_min(&spec, &grid);
        let fine = brute_force_min(&spec, &grid.refined().unwrap());
        match (coarse, fine) {
            (Ok((c, _)), Ok((f, _))) => {
                assert!(f.leq(c));
                compared += 1;
            }
            (Err(Error::NoFeasiblePoint), _) => {}
            (c, f) => panic!("coarse {c:?}, fine {f:?}"),
        }
    }
    assert!(compared >= 20, "only {compared} instances compared");
}
