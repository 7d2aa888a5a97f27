use num_rational::BigRational;
use prym_algebra::{rat, ratio, UniPoly};
use prym_core::real_place::{conjugation_fixed_count, jacobian_component_count, real_topology};
use prym_core::HyperellipticCurve;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Sample {
    lc: i64,
    roots: Vec<(i64, i64)>,
    /// `(x - c)^2 + e` with `e > 0`.
    quadratics: Vec<(i64, i64)>,
}

impl Sample {
    fn poly(&self) -> UniPoly {
        let mut p = UniPoly::constant(rat(self.lc));
        for &(a, b) in &self.roots {
            p = &p * &UniPoly::from_coeffs(vec![-ratio(a, b), rat(1)]);
        }
        for &(c, e) in &self.quadratics {
            p = &p * &UniPoly::from_ints(&[c * c + e, -2 * c, 1]);
        }
        p
    }

    fn eval(&self, x: f64) -> f64 {
        let mut v = self.lc as f64;
        for &(a, b) in &self.roots {
            v *= x - a as f64 / b as f64;
        }
        for &(c, e) in &self.quadratics {
            v *= (x - c as f64).powi(2) + e as f64;
        }
        v
    }

    fn degree(&self) -> usize {
        self.roots.len() + 2 * self.quadratics.len()
    }
}

fn sample(rng: &mut ChaCha8Rng) -> Sample {
    let degree = if rng.gen_bool(0.5) { 6 } else { 8 };
    let k = 2 * rng.gen_range(1..=degree / 2);
    let mut values: Vec<BigRational> = Vec::new();
    let mut roots = Vec::new();
    while roots.len() < k {
        let (a, b) = (rng.gen_range(-30i64..=30), rng.gen_range(1i64..=3));
        let v = ratio(a, b);
        if values.iter().all(|w| (w - &v) * rat(10) > rat(1) || (&v - w) * rat(10) > rat(1)) {
            values.push(v);
            roots.push((a, b));
        }
    }
    let quadratics = (0..(degree - k) / 2).map(|_| (rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4))).collect();
    let lc = rng.gen_range(1i64..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Sample { lc, roots, quadratics }
}

/// Ovals from the signs of `F` on a fine grid.
fn grid_ovals(s: &Sample) -> usize {
    let step = 1.0 / 512.0;
    let offset = 1e-5 * std::f64::consts::SQRT_2;
    let mut runs = 0;
    let mut prev = false;
    let (mut first_pos, mut last_pos) = (false, false);
    let n = (80.0 / step) as i64;
    for i in 0..=n {
        let x = -40.0 + i as f64 * step + offset;
        let pos = s.eval(x) > 0.0;
        if i == 0 {
            first_pos = pos;
        }
        if pos && !prev {
            runs += 1;
        }
        prev = pos;
        last_pos = pos;
    }
    // Even degree: the two unbounded runs meet at infinity.
    if s.degree() % 2 == 0 && first_pos && last_pos {
        runs -= 1;
    }
    runs
}

pub fn check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0da1);
    for _ in 0..100 {
        let s = sample(&mut rng);
        let c = HyperellipticCurve::new(s.poly()).unwrap();
        let topo = real_topology(&c).unwrap();
        assert_eq!(topo.oval_count(), grid_ovals(&s), "{c}");
        if topo.has_real_points() {
            let g = c.genus();
            let want = (1usize << g) * jacobian_component_count(topo.oval_count(), g) as usize;
            assert_eq!(conjugation_fixed_count(&topo).unwrap(), want, "{c}");
        }
    }
}
