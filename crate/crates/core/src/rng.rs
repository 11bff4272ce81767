//! Self-contained deterministic random number generation.
//!
//! Lottery draws must replay bit-for-bit on any machine, years later, from
//! the seed recorded in the audit document. To guarantee that, the generator
//! is pinned here rather than taken from an external crate whose stream may
//! change between versions. Seeds are expanded with splitmix64 and the
//! stream is xoshiro256** (Blackman & Vigna), both public-domain algorithms
//! with published reference implementations.
//!
//! Conventions used by everything downstream:
//! - `next_f64` takes the top 53 bits of one `next_u64`, uniform in [0, 1).
//! - `below(n)` is the multiply-shift reduction `(u128(x) * n) >> 64`.
//! - `shuffle` is Fisher-Yates from the last element down, using `below`.
//! - `normal` is one Box-Muller cosine transform per call (two uniforms).

#[derive(Clone, Debug)]
pub struct Rng {
    state: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        Rng {
            state: [
                splitmix64(&mut s),
                splitmix64(&mut s),
                splitmix64(&mut s),
                splitmix64(&mut s),
            ],
        }
    }

    /// Independent stream for sub-task `index` of a run seeded with `master`
    /// (one simulation trial, one bootstrap resample, ...).
    pub fn derive(master: u64, index: u64) -> Self {
        let mut s = master ^ index.wrapping_mul(0xA24B_AED4_963E_E407);
        let first = splitmix64(&mut s);
        Rng::new(first)
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). Multiply-shift reduction; the bias is
    /// below n / 2^64, far under anything observable here.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0, "below(0) is undefined");
        (((self.next_u64() as u128) * (n as u128)) >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }

    /// Normal draw via the Box-Muller cosine branch. `u1` is mapped into
    /// (0, 1] so the logarithm is always finite.
    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        mean + sd * z
    }

    /// Log-normal draw with mean exactly 1 and standard deviation `sd`.
    /// `sd == 0` returns the constant 1.
    pub fn unit_mean_log_normal(&mut self, sd: f64) -> f64 {
        if sd == 0.0 {
            return 1.0;
        }
        let s2 = (1.0 + sd * sd).ln();
        self.normal(-0.5 * s2, s2.sqrt()).exp()
    }
}
