//! Deterministic pseudo-random numbers for reproducible reports.
//!
//! Every random quantity in the crate (sample points, generated metrics,
//! probe fields) is drawn from xorshift64* — Marsaglia's 64-bit shift-register
//! generator followed by a multiplicative scramble. The algorithm is fixed
//! here so that a given seed yields the same sample sequence on every
//! platform and in every port of the tool, independent of any external
//! RNG library's versioning.
//!
//! State update:  x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
//! Output:        x * 0x2545F4914F6CDD1D
//!
//! Seeds are pre-conditioned with one splitmix64 step so that small integer
//! seeds (0, 1, 2, ...) do not start in nearly identical states.

#[derive(Debug, Clone)]
pub struct XorShiftRng {
    state: u64,
}

/// One splitmix64 step; also used to derive independent substreams.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl XorShiftRng {
    pub fn new(seed: u64) -> Self {
        let mut state = splitmix64(seed);
        if state == 0 {
            // xorshift has a fixed point at zero
            state = 0x6A09E667F3BCC909;
        }
        XorShiftRng { state }
    }

    /// Generator for an independent substream labelled `label`.
    ///
    /// Used to decouple, e.g., the sample-point stream from the probe-field
    /// coefficient stream so that changing one does not shift the other.
    pub fn substream(seed: u64, label: u64) -> Self {
        XorShiftRng::new(seed ^ splitmix64(label))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = XorShiftRng::new(42);
        let mut b = XorShiftRng::new(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = XorShiftRng::new(1);
        let mut b = XorShiftRng::new(2);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn zero_seed_is_usable() {
        let mut r = XorShiftRng::new(0);
        let x = r.next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn substreams_are_independent_of_label_order() {
        let mut a = XorShiftRng::substream(7, 1);
        let mut b = XorShiftRng::substream(7, 2);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn range_respects_bounds() {
        let mut r = XorShiftRng::new(9);
        for _ in 0..1000 {
            let x = r.range(-2.0, 3.0);
            assert!((-2.0..3.0).contains(&x));
        }
    }

    #[test]
    fn known_first_output() {
        // Frozen so that accidental algorithm changes are caught: report
        // reproducibility depends on this exact stream.
        let mut r = XorShiftRng::new(1);
        assert_eq!(r.next_u64(), 0x4B46_A55D_F361_1B9B);
    }
}
