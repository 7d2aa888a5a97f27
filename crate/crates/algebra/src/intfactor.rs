//! Integer factorisation: trial division, perfect-power detection,
//! Miller–Rabin and Pollard rho with Brent cycle detection.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;

#[derive(Clone, Debug)]
pub struct FactorConfig {
    pub trial_bound: u64,
    pub time_budget: Duration,
    /// Extra random Miller–Rabin rounds for inputs of 64 bits or more.
    pub mr_rounds: usize,
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            time_budget: Duration::from_secs(120),
            mr_rounds: 32,
            seed: 0x5eed,
        }
    }
}

/// Prime factorisation of `|n|`, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.factors.iter().any(|(q, _)| q == p)
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    fn push(&mut self, p: BigInt, e: u32) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += e,
            None => self.factors.push((p, e)),
        }
    }
}

const WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mr_round(n: &BigUint, d: &BigUint, s: u32, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

fn is_probable_prime_with(n: &BigUint, rounds: usize, rng: &mut ChaCha8Rng) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &w in &WITNESSES_64 {
        let w = BigUint::from(w);
        if *n == w {
            return true;
        }
        if (n % &w).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n1 >> s;
    // These bases are a deterministic test below 2^64.
    for &w in &WITNESSES_64 {
        if !mr_round(n, &d, s, &BigUint::from(w)) {
            return false;
        }
    }
    if n.bits() <= 64 {
        return true;
    }
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n1);
        if !mr_round(n, &d, s, &a) {
            return false;
        }
    }
    true
}

/// Miller–Rabin: deterministic below 2^64, probabilistic above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let Some(u) = n.to_biguint() else {
        return false;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    is_probable_prime_with(&u, FactorConfig::default().mr_rounds, &mut rng)
}

/// Largest `k` with `n = m^k`, returning `(m, k)`.
fn perfect_power(n: &BigUint) -> (BigUint, u32) {
    let bits = n.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && num_traits::pow(r.clone(), k as usize) == *n {
            let (m, j) = perfect_power(&r);
            return (m, j * k);
        }
    }
    (n.clone(), 1)
}

fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng, deadline: Instant) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    loop {
        if Instant::now() > deadline {
            return None;
        }
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&one, n);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if Instant::now() > deadline {
                return None;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
}

/// 2, 3 and then the integers coprime to 6, up to `bound`.
fn trial_divisors(bound: u64) -> impl Iterator<Item = u64> {
    [2u64, 3]
        .into_iter()
        .chain((5..=bound).step_by(6).flat_map(|k| [k, k + 2]))
        .filter(move |&d| d <= bound)
}

/// Factor `n != 0` into primes. Cofactors that resist factorisation within
/// the time budget are reported as an error, never treated as prime.
pub fn factor_integer(n: &BigInt, cfg: &FactorConfig) -> Result<Factorization, AlgebraError> {
    if n.is_zero() {
        return Err(AlgebraError::FactorZero);
    }
    let deadline = Instant::now() + cfg.time_budget;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Factorization::default();
    let mut m = n.abs().to_biguint().expect("absolute value");
    for p in trial_divisors(cfg.trial_bound) {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push(BigInt::from(p), e);
        }
    }
    let mut stack = vec![(m, 1u32)];
    while let Some((c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime_with(&c, cfg.mr_rounds, &mut rng) {
            out.push(BigInt::from(c), mult);
            continue;
        }
        let (base, k) = perfect_power(&c);
        if k > 1 {
            stack.push((base, mult * k));
            continue;
        }
        match pollard_brent(&c, &mut rng, deadline) {
            Some(d) => {
                let other = &c / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => {
                return Err(AlgebraError::FactorizationTimeout {
                    cofactor: BigInt::from(c),
                })
            }
        }
    }
    out.factors.sort();
    Ok(out)
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero());
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}
