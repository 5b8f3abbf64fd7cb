//! The mapper's random source.
//!
//! xorshift64* with the state seeded by one round of splitmix64, so
//! nearby seeds give unrelated streams:
//!
//! ```text
//! seed:  z = seed + 0x9E3779B97F4A7C15
//!        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!        state = z ^ (z >> 31)            (0 is replaced by 0x9E3779B97F4A7C15)
//! next:  x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
//!        return x * 0x2545F4914F6CDD1D
//! pick:  index = (next() * len) >> 64     (128-bit product)
//! ```
//!
//! All arithmetic wraps modulo 2^64.

#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        Self { state: if state == 0 { GOLDEN } else { state } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform index in `0..len`. `len` must be nonzero.
    pub fn pick(&mut self, len: usize) -> usize {
        assert!(len > 0, "pick from an empty list");
        ((u128::from(self.next_u64()) * len as u128) >> 64) as usize
    }
}
