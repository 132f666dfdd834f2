//! Seeded, stream-splittable random number generation and the standard
//! normal CDF/quantile pair used throughout the engine.
//!
//! Streams are ChaCha8 instances keyed by a 64-bit seed; the 64-bit ChaCha
//! stream word carries the substream index. One substream per Monte Carlo
//! path makes every path's draws independent of how work is batched across
//! threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::{Error, Result};

/// Immutable descriptor of one random stream: master seed plus substream id.
///
/// Identical `(seed, stream_id)` always reproduces the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive a child stream. Path `i` of a job uses `substream(i)`, so its
    /// draws do not depend on batch or thread layout. Ids are decorrelated
    /// with a SplitMix64 finalizer before entering the ChaCha stream word.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: mix64(self.stream_id ^ mix64(index.wrapping_add(1))),
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> PathRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        PathRng { rng }
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Primitive sampler over one stream. Created via [`RngStream::rng`].
pub struct PathRng {
    rng: ChaCha8Rng,
}

impl PathRng {
    /// Uniform draw strictly inside (0, 1): `(k + 0.5) / 2^53` with `k`
    /// the top 53 bits of one ChaCha word, so quantile transforms never
    /// see 0 or 1.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw by inverse CDF; consumes exactly one uniform.
    pub fn std_normal(&mut self) -> f64 {
        norm_quantile_unchecked(self.uniform())
    }

    /// Poisson draw with the given intensity (0 is the degenerate law at 0).
    pub fn poisson(&mut self, intensity: f64) -> Result<u64> {
        if !intensity.is_finite() || intensity < 0.0 {
            return Err(Error::invalid(
                "intensity",
                format!("must be finite and >= 0, got {intensity}"),
            ));
        }
        Ok(self.poisson_unchecked(intensity))
    }

    pub(crate) fn poisson_unchecked(&mut self, intensity: f64) -> u64 {
        if intensity == 0.0 {
            return 0;
        }
        let dist = Poisson::new(intensity).expect("validated intensity");
        dist.sample(&mut self.rng) as u64
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal quantile, the inverse of [`normal_cdf`].
///
/// Wichura's PPND16 rational approximations; absolute error is far below
/// the 1e-9 the balance-sheet closed forms need.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    Ok(norm_quantile_unchecked(p))
}

pub(crate) fn norm_quantile_unchecked(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * horner(&CENTRAL_NUM, r) / horner(&CENTRAL_DEN, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        horner(&MIDDLE_NUM, r) / horner(&MIDDLE_DEN, r)
    } else {
        let r = r - 5.0;
        horner(&FAR_NUM, r) / horner(&FAR_DEN, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

#[inline]
fn horner(coeffs: &[f64; 8], r: f64) -> f64 {
    // coeffs ordered highest degree first
    coeffs.iter().fold(0.0, |acc, &c| acc * r + c)
}

#[allow(clippy::excessive_precision)] // published table digits
const CENTRAL_NUM: [f64; 8] = [
    2_509.080_928_730_122_7,
    33_430.575_583_588_13,
    67_265.770_927_008_7,
    45_921.953_931_549_87,
    13_731.693_765_509_461,
    1_971.590_950_306_551_3,
    133.141_667_891_784_38,
    3.387_132_872_796_366_5,
];
#[allow(clippy::excessive_precision)] // published table digits
const CENTRAL_DEN: [f64; 8] = [
    5_226.495_278_852_545_5,
    28_729.085_735_721_943,
    39_307.895_800_092_71,
    21_213.794_301_586_597,
    5_394.196_021_424_751,
    687.187_007_492_057_9,
    42.313_330_701_600_91,
    1.0,
];
#[allow(clippy::excessive_precision)] // published table digits
const MIDDLE_NUM: [f64; 8] = [
    7.745_450_142_783_414e-4,
    2.272_384_498_926_918_4e-2,
    2.417_807_251_774_506e-1,
    1.270_458_252_452_368_4,
    3.647_848_324_763_204_6,
    5.769_497_221_460_691,
    4.630_337_846_156_546,
    1.423_437_110_749_683_6,
];
#[allow(clippy::excessive_precision)] // published table digits
const MIDDLE_DEN: [f64; 8] = [
    1.050_750_071_644_416_9e-9,
    5.475_938_084_995_345e-4,
    1.519_866_656_361_645_7e-2,
    1.481_039_764_274_800_8e-1,
    6.897_673_349_851e-1,
    1.676_384_830_183_803_8,
    2.053_191_626_637_758_8,
    1.0,
];
#[allow(clippy::excessive_precision)] // published table digits
const FAR_NUM: [f64; 8] = [
    2.010_334_399_292_288_1e-7,
    2.711_555_568_743_487_6e-5,
    1.242_660_947_388_078_4e-3,
    2.653_218_952_657_612_4e-2,
    2.965_605_718_285_048_9e-1,
    1.784_826_539_917_291_3,
    5.463_784_911_164_114,
    6.657_904_643_501_103,
];
#[allow(clippy::excessive_precision)] // published table digits
const FAR_DEN: [f64; 8] = [
    2.044_263_103_389_939_7e-15,
    1.421_511_758_316_445_9e-7,
    1.846_318_317_510_054_8e-5,
    7.868_691_311_456_132e-4,
    1.487_536_129_085_061_5e-2,
    1.369_298_809_227_358e-1,
    5.998_322_065_558_88e-1,
    1.0,
];
