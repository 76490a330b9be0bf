//! Float helpers for the `no_std` build.
//!
//! `core` has no transcendental functions, so everything routes through
//! `libm`. Callers use these free functions instead of the `std` inherent
//! methods; behaviour matches `std` to within an ulp.

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

pub fn abs(x: f64) -> f64 {
    // `f64::abs` is not in `core` on stable; bit trick avoids a libm call.
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

/// x^n for small integer powers, by repeated multiplication.
pub fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    let mut b = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r *= b;
        }
        b *= b;
        e >>= 1;
    }
    r
}

/// atan2 normalized to [0, 2π).
pub fn angle_2pi(y: f64, x: f64) -> f64 {
    let t = atan2(y, x);
    if t < 0.0 {
        t + 2.0 * core::f64::consts::PI
    } else {
        t
    }
}

/// Deterministic xorshift generator for randomized checks in tests and
/// property sweeps. Not for cryptography.
#[derive(Clone)]
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_multiplication() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(3.0, 0), 1.0);
        let x = 1.7;
        assert!(abs(powi(x, 5) - x * x * x * x * x) < 1e-15);
        assert!(abs(powi(x, -2) - 1.0 / (x * x)) < 1e-16);
    }

    #[test]
    fn angle_normalization() {
        assert!(abs(angle_2pi(0.0, 1.0)) < 1e-15);
        assert!(abs(angle_2pi(-1.0, 0.0) - 1.5 * core::f64::consts::PI) < 1e-15);
    }
}
