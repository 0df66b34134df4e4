//! Instrumented scalar that tallies real operations through the kernel.
//!
//! Each [`CountingScalar`] carries its value and a structural support: which
//! of its two components may be nonzero. Support is decided by the dataflow
//! (a real input has a structurally zero imaginary part), never by runtime
//! values, so the tallies are those of the pruned straight-line program.
//!
//! Counting rules, per component:
//!
//! * an addition or subtraction is a real addition only when both operand
//!   components are in support; otherwise the result is a copy;
//! * a halving is one real shift per supported component;
//! * rotation by `j` swaps components and negates one, which is free;
//! * negations are tallied separately and are not additions.
//!
//! A complex addition whose operands have disjoint support (a purely real
//! value added to a purely imaginary one) needs no adder: it only places two
//! words side by side. Such nodes are tallied as `merges`. The published
//! addition counts take every addition node of the flow graph as one
//! addition per active data word, so [`OpCounts::adds`] reports
//! `real_adds + merges`; the split stays visible in [`OpCounts`].

use std::cell::Cell;
use std::ops::{Add, Neg, Sub};
use std::rc::Rc;

use num_complex::Complex64;
use serde::Serialize;

use crate::kernel::fast_transform;
use crate::matrix::{dft_matrix, N};
use crate::scalar::Multiplierless;

#[derive(Debug, Default)]
pub struct Tally {
    real_adds: Cell<u64>,
    merges: Cell<u64>,
    real_mults: Cell<u64>,
    real_shifts: Cell<u64>,
    negations: Cell<u64>,
}

impl Tally {
    fn bump(cell: &Cell<u64>, by: u64) {
        cell.set(cell.get() + by);
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            mults: self.real_mults.get(),
            adds: self.real_adds.get() + self.merges.get(),
            shifts: self.real_shifts.get(),
            adder_adds: self.real_adds.get(),
            merges: self.merges.get(),
            negations: self.negations.get(),
        }
    }
}

/// Real-operation totals for one kernel invocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub mults: u64,
    /// Additions in the flow-graph convention (`adder_adds + merges`).
    pub adds: u64,
    pub shifts: u64,
    /// Additions that need an adder (both operand words nonzero).
    pub adder_adds: u64,
    /// Addition nodes joining a purely real and a purely imaginary word.
    pub merges: u64,
    pub negations: u64,
}

impl OpCounts {
    /// `(mults, adds, shifts)`, the triple compared against published counts.
    pub fn triple(&self) -> (u64, u64, u64) {
        (self.mults, self.adds, self.shifts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Support {
    re: bool,
    im: bool,
}

impl Support {
    fn count(self) -> u64 {
        u64::from(self.re) + u64::from(self.im)
    }

    fn any(self) -> bool {
        self.re || self.im
    }

    fn union(self, other: Self) -> Self {
        Support { re: self.re || other.re, im: self.im || other.im }
    }
}

/// A complex value with structural support and a shared operation tally.
#[derive(Clone, Debug)]
pub struct CountingScalar {
    value: Complex64,
    support: Support,
    tally: Rc<Tally>,
}

impl CountingScalar {
    pub fn real(value: f64, tally: &Rc<Tally>) -> Self {
        Self {
            value: Complex64::new(value, 0.0),
            support: Support { re: true, im: false },
            tally: Rc::clone(tally),
        }
    }

    pub fn complex(value: Complex64, tally: &Rc<Tally>) -> Self {
        Self { value, support: Support { re: true, im: true }, tally: Rc::clone(tally) }
    }

    pub fn zero(tally: &Rc<Tally>) -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            support: Support { re: false, im: false },
            tally: Rc::clone(tally),
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// Multiplication by a constant coefficient, counted as a full complex
    /// multiply (4 real multiplications, 2 real additions) on a complex
    /// operand. Only the direct reference transform uses this.
    pub fn mul_coefficient(self, c: Complex64) -> Self {
        let s = self.support;
        let mults = if s.re && s.im { 4 } else { 2 * s.count() };
        let adds = u64::from(s.re && s.im) * 2;
        Tally::bump(&self.tally.real_mults, mults);
        Tally::bump(&self.tally.real_adds, adds);
        let support = if s.any() { Support { re: true, im: true } } else { s };
        Self { value: self.value * c, support, tally: self.tally }
    }

    fn combine(self, rhs: Self, value: Complex64) -> Self {
        let (a, b) = (self.support, rhs.support);
        let both = u64::from(a.re && b.re) + u64::from(a.im && b.im);
        Tally::bump(&self.tally.real_adds, both);
        if both == 0 && a.any() && b.any() {
            Tally::bump(&self.tally.merges, 1);
        }
        Self { value, support: a.union(b), tally: self.tally }
    }
}

impl Add for CountingScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let v = self.value + rhs.value;
        self.combine(rhs, v)
    }
}

impl Sub for CountingScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let v = self.value - rhs.value;
        self.combine(rhs, v)
    }
}

impl Neg for CountingScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Tally::bump(&self.tally.negations, self.support.count());
        Self { value: -self.value, ..self }
    }
}

impl Multiplierless for CountingScalar {
    fn halve(self) -> Self {
        Tally::bump(&self.tally.real_shifts, self.support.count());
        Self { value: self.value * 0.5, ..self }
    }

    fn mul_j(self) -> Self {
        Tally::bump(&self.tally.negations, u64::from(self.support.im));
        let support = Support { re: self.support.im, im: self.support.re };
        Self { value: Complex64::new(-self.value.im, self.value.re), support, tally: self.tally }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Real,
    Complex,
}

fn probe_inputs(kind: InputKind, tally: &Rc<Tally>) -> [CountingScalar; N] {
    // values are irrelevant to the counts; distinct ones keep the run honest
    std::array::from_fn(|n| {
        let x = n as f64 + 1.0;
        match kind {
            InputKind::Real => CountingScalar::real(x, tally),
            InputKind::Complex => CountingScalar::complex(Complex64::new(x, 0.5 - x), tally),
        }
    })
}

/// Runs the fast kernel on counting scalars and returns its operation totals.
pub fn count_operations(kind: InputKind) -> OpCounts {
    let tally = Rc::new(Tally::default());
    let out = fast_transform(probe_inputs(kind, &tally));
    drop(out);
    tally.snapshot()
}

/// Totals for the direct matrix-vector DFT: every entry is a general complex
/// multiply and each output sums eight products.
pub fn count_direct_dft(kind: InputKind) -> OpCounts {
    let tally = Rc::new(Tally::default());
    let v = probe_inputs(kind, &tally);
    let f = dft_matrix();
    for i in 0..N {
        let out = (0..N)
            .map(|k| v[k].clone().mul_coefficient(f.entry(i, k)))
            .reduce(|acc, p| acc + p);
        drop(out);
    }
    tally.snapshot()
}
