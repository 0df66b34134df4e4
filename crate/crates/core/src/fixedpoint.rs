//! Bit-exact model of a 16-bit multiplierless datapath.
//!
//! Inputs are Q1.15 words. The kernel runs on 32-bit accumulators using the
//! same straight-line program as the floating and exact paths; halving is an
//! arithmetic right shift, which truncates toward negative infinity. Pipeline
//! registers and clocking are not modeled, only the dataflow.

use std::cell::Cell;
use std::io::{Read, Write};
use std::ops::{Add, Neg, Sub};
use std::rc::Rc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::fast_transform;
use crate::matrix::N;
use crate::scalar::Multiplierless;

pub const FRAC_BITS: u8 = 15;
pub const Q15_ONE: f64 = 32768.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Q15Sample {
    pub re: i16,
    pub im: i16,
}

impl Q15Sample {
    pub fn new(re: i16, im: i16) -> Self {
        Self { re, im }
    }

    pub fn to_complex64(self) -> Complex64 {
        Complex64::new(self.re as f64 / Q15_ONE, self.im as f64 / Q15_ONE)
    }
}

/// Rounds to 15 fractional bits, half away from zero.
///
/// The admissible range is the open interval `(-1, 1)` per component. Values
/// within half an LSB of `+1` round to 32768, one past the largest word, and
/// saturate to 32767.
pub fn quantize(v: Complex64) -> Result<Q15Sample> {
    let ok = |x: f64| x.is_finite() && x.abs() < 1.0;
    if !(ok(v.re) && ok(v.im)) {
        return Err(Error::QuantizerRange { re: v.re, im: v.im });
    }
    let word = |x: f64| (x * Q15_ONE).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
    Ok(Q15Sample { re: word(v.re), im: word(v.im) })
}

/// 32-bit accumulator pair with a fractional-bit tag.
///
/// Overflow is an invariant violation and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WideAccumulator {
    pub re: i32,
    pub im: i32,
    pub frac_bits: u8,
}

impl WideAccumulator {
    pub fn to_complex64(self) -> Complex64 {
        let scale = (-(self.frac_bits as f64)).exp2();
        Complex64::new(self.re as f64 * scale, self.im as f64 * scale)
    }

    fn aligned(self, rhs: Self) -> u8 {
        assert_eq!(self.frac_bits, rhs.frac_bits, "fractional alignment mismatch");
        self.frac_bits
    }
}

impl From<Q15Sample> for WideAccumulator {
    fn from(s: Q15Sample) -> Self {
        Self { re: s.re.into(), im: s.im.into(), frac_bits: FRAC_BITS }
    }
}

impl Add for WideAccumulator {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let frac_bits = self.aligned(rhs);
        Self {
            re: self.re.checked_add(rhs.re).expect("accumulator overflow"),
            im: self.im.checked_add(rhs.im).expect("accumulator overflow"),
            frac_bits,
        }
    }
}

impl Sub for WideAccumulator {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let frac_bits = self.aligned(rhs);
        Self {
            re: self.re.checked_sub(rhs.re).expect("accumulator overflow"),
            im: self.im.checked_sub(rhs.im).expect("accumulator overflow"),
            frac_bits,
        }
    }
}

impl Neg for WideAccumulator {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: self.re.checked_neg().expect("accumulator overflow"),
            im: self.im.checked_neg().expect("accumulator overflow"),
            frac_bits: self.frac_bits,
        }
    }
}

impl Multiplierless for WideAccumulator {
    fn halve(self) -> Self {
        Self { re: self.re >> 1, im: self.im >> 1, frac_bits: self.frac_bits }
    }

    fn mul_j(self) -> Self {
        Self {
            re: self.im.checked_neg().expect("accumulator overflow"),
            im: self.re,
            frac_bits: self.frac_bits,
        }
    }
}

pub fn fixed_fast_transform(v: &[Q15Sample; N]) -> [WideAccumulator; N] {
    fast_transform(v.map(WideAccumulator::from))
}

/// Reference result of the same program on the same integer inputs with no
/// truncation, in integer units.
pub fn exact_reference(v: &[Q15Sample; N]) -> [Complex64; N] {
    fast_transform(v.map(|s| Complex64::new(s.re.into(), s.im.into())))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqnrReport {
    pub trials: usize,
    pub amplitude: f64,
    /// Largest per-component error, in integer (LSB) units.
    pub max_abs_err: f64,
    pub rms_err: f64,
    /// `None` when the error is identically zero.
    pub sqnr_db: Option<f64>,
}

/// Monte-Carlo comparison of the fixed-point kernel against exact
/// arithmetic on uniformly random words with `|component| ≤ amplitude·32767`.
pub fn sqnr_report(trials: usize, amplitude: f64, seed: u64) -> SqnrReport {
    assert!(trials >= 1, "at least one trial");
    assert!((0.0..=1.0).contains(&amplitude), "amplitude must lie in [0, 1]");
    let bound = (amplitude * i16::MAX as f64).floor() as i16;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs: f64 = 0.0;
    let mut err_energy = 0.0;
    let mut sig_energy = 0.0;
    for _ in 0..trials {
        let v: [Q15Sample; N] = std::array::from_fn(|_| {
            Q15Sample::new(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound))
        });
        let fixed = fixed_fast_transform(&v);
        let exact = exact_reference(&v);
        for (f, e) in fixed.iter().zip(&exact) {
            let (dr, di) = (f.re as f64 - e.re, f.im as f64 - e.im);
            max_abs = max_abs.max(dr.abs()).max(di.abs());
            err_energy += dr * dr + di * di;
            sig_energy += e.norm_sqr();
        }
    }
    let components = (trials * N * 2) as f64;
    SqnrReport {
        trials,
        amplitude,
        max_abs_err: max_abs,
        rms_err: (err_energy / components).sqrt(),
        sqnr_db: (err_energy > 0.0).then(|| 10.0 * (sig_energy / err_energy).log10()),
    }
}

/// Interval `[lo, hi]` per component, propagated through the kernel to bound
/// word growth. Every intermediate interval is folded into a shared peak.
#[derive(Clone, Debug)]
struct Interval {
    re: (i64, i64),
    im: (i64, i64),
    peak: Rc<Cell<(i64, i64)>>,
}

impl Interval {
    fn with(self, re: (i64, i64), im: (i64, i64)) -> Self {
        let (lo, hi) = self.peak.get();
        self.peak.set((lo.min(re.0).min(im.0), hi.max(re.1).max(im.1)));
        Self { re, im, peak: self.peak }
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        let (re, im) = ((self.re.0 + r.re.0, self.re.1 + r.re.1), (self.im.0 + r.im.0, self.im.1 + r.im.1));
        self.with(re, im)
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        let (re, im) = ((self.re.0 - r.re.1, self.re.1 - r.re.0), (self.im.0 - r.im.1, self.im.1 - r.im.0));
        self.with(re, im)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        let (re, im) = ((-self.re.1, -self.re.0), (-self.im.1, -self.im.0));
        self.with(re, im)
    }
}

impl Multiplierless for Interval {
    fn halve(self) -> Self {
        let (re, im) = ((self.re.0 >> 1, self.re.1 >> 1), (self.im.0 >> 1, self.im.1 >> 1));
        self.with(re, im)
    }

    fn mul_j(self) -> Self {
        let (re, im) = ((-self.im.1, -self.im.0), self.re);
        self.with(re, im)
    }
}

/// Signed word widths implied by full-scale Q1.15 inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordWidths {
    pub input_bits: u32,
    /// Widest output component.
    pub output_bits: u32,
    /// Widest intermediate value anywhere in the program.
    pub internal_bits: u32,
    pub accumulator_bits: u32,
}

fn signed_bits(lo: i64, hi: i64) -> u32 {
    (1..=64).find(|&b| lo >= -(1i64 << (b - 1)) && hi < (1i64 << (b - 1))).unwrap_or(64)
}

pub fn word_widths() -> WordWidths {
    let peak = Rc::new(Cell::new((0, 0)));
    let full = (i16::MIN as i64, i16::MAX as i64);
    let input = Interval { re: full, im: full, peak: Rc::clone(&peak) };
    let out = fast_transform(std::array::from_fn::<_, N, _>(|_| input.clone()));
    let output_bits = out
        .iter()
        .map(|o| signed_bits(o.re.0.min(o.im.0), o.re.1.max(o.im.1)))
        .max()
        .unwrap_or(0);
    let (lo, hi) = peak.get();
    WordWidths {
        input_bits: 16,
        output_bits,
        internal_bits: signed_bits(lo, hi),
        accumulator_bits: 32,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleRow {
    n: usize,
    re_q15: i16,
    im_q15: i16,
}

/// Writes snapshots as `n,re_q15,im_q15` rows, eight rows per snapshot.
pub fn write_samples_csv<W: Write>(out: W, snapshots: &[[Q15Sample; N]]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for snap in snapshots {
        for (n, s) in snap.iter().enumerate() {
            w.serialize(SampleRow { n, re_q15: s.re, im_q15: s.im }).map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| Error::SampleFile(e.to_string()))
}

pub fn read_samples_csv<R: Read>(input: R) -> Result<Vec<[Q15Sample; N]>> {
    let mut snapshots = Vec::new();
    let mut current = [Q15Sample::default(); N];
    let mut count = 0usize;
    for row in csv::Reader::from_reader(input).deserialize::<SampleRow>() {
        let row = row.map_err(csv_error)?;
        let expect = count % N;
        if row.n != expect {
            return Err(Error::SampleFile(format!(
                "row {}: element index {} where {} was expected",
                count + 1,
                row.n,
                expect
            )));
        }
        current[expect] = Q15Sample::new(row.re_q15, row.im_q15);
        count += 1;
        if count.is_multiple_of(N) {
            snapshots.push(current);
        }
    }
    if !count.is_multiple_of(N) {
        return Err(Error::SampleFile(format!("{count} rows is not a whole number of snapshots")));
    }
    Ok(snapshots)
}

fn csv_error(e: csv::Error) -> Error {
    Error::SampleFile(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicGaussian;
    use crate::matrix::approx_matrix;
    use proptest::prelude::*;

    #[test]
    fn quantizer_examples() {
        assert_eq!(quantize(Complex64::new(0.5, 0.0)).unwrap(), Q15Sample::new(16384, 0));
        assert!(quantize(Complex64::new(-1.0, 0.0)).is_err());
        assert!(quantize(Complex64::new(0.0, 1.0)).is_err());
        assert!(quantize(Complex64::new(f64::NAN, 0.0)).is_err());
        // 32768/3 = 10922.67
        assert_eq!(quantize(Complex64::new(1.0 / 3.0, -1.0 / 3.0)).unwrap(), Q15Sample::new(10923, -10923));
        // half an LSB rounds away from zero
        assert_eq!(quantize(Complex64::new(0.5 / Q15_ONE, -1.5 / Q15_ONE)).unwrap(), Q15Sample::new(1, -2));
        assert_eq!(quantize(Complex64::new(0.99999, -0.99999)).unwrap(), Q15Sample::new(32767, -32768));
    }

    #[test]
    fn dc_and_impulse() {
        let half = Q15Sample::new(16384, 0);
        let out = fixed_fast_transform(&[half; N]);
        assert_eq!((out[0].re, out[0].im), (131072, 0));
        assert!(out[1..].iter().all(|o| o.re == 0 && o.im == 0));

        let mut imp = [Q15Sample::default(); N];
        imp[0] = half;
        assert!(fixed_fast_transform(&imp).iter().all(|o| (o.re, o.im) == (16384, 0)));
    }

    #[test]
    fn exact_reference_is_the_approximate_matrix() {
        let v: [Q15Sample; N] = std::array::from_fn(|n| Q15Sample::new(1000 * n as i16 - 3001, 77 - 9 * n as i16));
        let dy = approx_matrix()
            .apply_exact(&v.map(|s| DyadicGaussian::from_int(s.re.into(), s.im.into())))
            .unwrap();
        let reference = exact_reference(&v);
        for n in 0..N {
            assert_eq!(reference[n], dy[n].to_complex64());
        }
    }

    #[test]
    fn exhaustive_corners_do_not_overflow() {
        let bound = 8 * 32768;
        for pattern in 0u32..(1 << 16) {
            let word = |bit: u32| if pattern >> bit & 1 == 1 { i16::MIN } else { i16::MAX };
            let v: [Q15Sample; N] = std::array::from_fn(|n| Q15Sample::new(word(n as u32), word(n as u32 + 8)));
            for o in fixed_fast_transform(&v) {
                assert!(o.re.abs() <= bound && o.im.abs() <= bound);
            }
        }
    }

    #[test]
    fn word_growth_fits_nineteen_bits() {
        let w = word_widths();
        assert_eq!(w.output_bits, 19);
        assert!(w.internal_bits <= 19, "{w:?}");
    }

    #[test]
    fn zero_input_has_no_error() {
        let r = sqnr_report(10, 0.0, 1);
        assert_eq!((r.max_abs_err, r.rms_err, r.sqnr_db), (0.0, 0.0, None));
    }

    #[test]
    fn sample_csv_round_trip_and_errors() {
        let snaps = vec![
            std::array::from_fn(|n| Q15Sample::new(n as i16, -(n as i16))),
            [Q15Sample::new(i16::MIN, i16::MAX); N],
        ];
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &snaps).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("n,re_q15,im_q15\n0,0,0\n"));
        assert_eq!(read_samples_csv(buf.as_slice()).unwrap(), snaps);

        assert!(read_samples_csv("n,re_q15,im_q15\n0,1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv("n,re_q15,im_q15\n1,1,2\n".as_bytes()).is_err());
        assert!(read_samples_csv("n,re_q15,im_q15\n0,40000,2\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn truncation_error_is_bounded(re in proptest::array::uniform8(any::<i16>()), im in proptest::array::uniform8(any::<i16>())) {
            let v: [Q15Sample; N] = std::array::from_fn(|n| Q15Sample::new(re[n], im[n]));
            let fixed = fixed_fast_transform(&v);
            let exact = exact_reference(&v);
            for (f, e) in fixed.iter().zip(&exact) {
                prop_assert!((f.re as f64 - e.re).abs() <= 2.0);
                prop_assert!((f.im as f64 - e.im).abs() <= 2.0);
            }
        }

        #[test]
        fn deterministic(re in proptest::array::uniform8(any::<i16>())) {
            let v: [Q15Sample; N] = std::array::from_fn(|n| Q15Sample::new(re[n], re[7 - n]));
            prop_assert_eq!(fixed_fast_transform(&v), fixed_fast_transform(&v));
        }
    }
}
