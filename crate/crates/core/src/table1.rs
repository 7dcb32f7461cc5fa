//! Embedded pair table of product unitaries for the twelve-state encoding.
//!
//! Each non-orthogonal pair `(row, col)` of encoding states is discriminated
//! by `{W^dag E1 W, W^dag E2 W}` with `W = U1 (x) U2`, where each factor is
//! a product `B A` of two single-qubit unitaries from an eight-element set.
//! Rows run over the x-states (against y- and z-columns) and the y-states
//! (against z-columns); same-axis pairs are orthogonal and need no entry.

use num_complex::Complex64 as C64;

use crate::operator::{Axis, Sign, Tensor, UnitaryOperator};

/// Names of the single-qubit unitaries used in the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalUnitary {
    A0y,
    A1y,
    A0z,
    A1z,
    B0x,
    B1x,
    B0y,
    B1y,
}

impl LocalUnitary {
    pub fn name(self) -> &'static str {
        match self {
            LocalUnitary::A0y => "A0y",
            LocalUnitary::A1y => "A1y",
            LocalUnitary::A0z => "A0z",
            LocalUnitary::A1z => "A1z",
            LocalUnitary::B0x => "B0x",
            LocalUnitary::B1x => "B1x",
            LocalUnitary::B0y => "B0y",
            LocalUnitary::B1y => "B1y",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "A0y" => LocalUnitary::A0y,
            "A1y" => LocalUnitary::A1y,
            "A0z" => LocalUnitary::A0z,
            "A1z" => LocalUnitary::A1z,
            "B0x" => LocalUnitary::B0x,
            "B1x" => LocalUnitary::B1x,
            "B0y" => LocalUnitary::B0y,
            "B1y" => LocalUnitary::B1y,
            _ => return None,
        })
    }

    pub fn matrix(self) -> UnitaryOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| C64::new(x, 0.0);
        let i = |x: f64| C64::new(0.0, x);
        let entries = match self {
            LocalUnitary::A0y => [r(s), i(-s), i(-s), r(s)],
            LocalUnitary::A1y => [r(s), i(s), i(s), r(s)],
            LocalUnitary::A0z => [r(1.0), r(0.0), r(0.0), r(1.0)],
            LocalUnitary::A1z => [r(0.0), i(-1.0), i(1.0), r(0.0)],
            LocalUnitary::B0x => [r(1.0), r(0.0), r(0.0), r(1.0)],
            LocalUnitary::B1x => [r(1.0), r(0.0), r(0.0), r(-1.0)],
            LocalUnitary::B0y => [r(1.0), r(0.0), r(0.0), i(-1.0)],
            LocalUnitary::B1y => [r(1.0), r(0.0), r(0.0), i(1.0)],
        };
        UnitaryOperator::new(2, &entries).expect("table unitaries are unitary")
    }
}

/// `U1 (x) U2` with `U1 = B1 A1`, `U2 = B2 A2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellUnitary {
    pub first: (LocalUnitary, LocalUnitary),
    pub second: (LocalUnitary, LocalUnitary),
}

impl CellUnitary {
    pub fn operator(&self) -> UnitaryOperator {
        let u1 = self.first.0.matrix().compose(&self.first.1.matrix()).expect("2x2");
        let u2 = self.second.0.matrix().compose(&self.second.1.matrix()).expect("2x2");
        u1.tensor(&u2).expect("2x2 factors")
    }

    pub fn label(&self) -> String {
        format!(
            "{}{} (x) {}{}",
            self.first.0.name(),
            self.first.1.name(),
            self.second.0.name(),
            self.second.1.name()
        )
    }
}

/// Classification of an ordered pair of encoding states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Cell {
    /// Identical states: not a valid question.
    NotApplicable,
    /// Orthogonal states, discriminated by a projective quantum measurement.
    QuantumDistinguishable,
    /// Non-orthogonal pair discriminated by a conjugated base measurement.
    Conjugate(CellUnitary),
}

// Rows/columns within an axis block are ordered ++, +-, -+, -- (sign of the
// A factor, sign of the B factor).
const X_VS_Y: [[&str; 4]; 4] = [
    ["B0x A0y B0x A0y", "B0x A0y B0x A1y", "B0x A1y B0x A0y", "B0x A1y B0x A1y"],
    ["B0x A0y B1x A0y", "B0x A0y B1x A1y", "B0x A1y B1x A0y", "B0x A1y B1x A1y"],
    ["B1x A0y B0x A0y", "B1x A0y B0x A1y", "B1x A1y B0x A0y", "B1x A1y B0x A1y"],
    ["B1x A0y B1x A0y", "B1x A0y B1x A1y", "B1x A1y B1x A0y", "B1x A1y B1x A1y"],
];

const X_VS_Z: [[&str; 4]; 4] = [
    ["B0x A0z B0x A0z", "B0x A0z B1x A1z", "B1x A1z B0x A0z", "B1x A1z B1x A1z"],
    ["B0x A0z B1x A0z", "B0x A0z B0x A1z", "B1x A1z B1x A0z", "B1x A1z B0x A1z"],
    ["B1x A0z B0x A0z", "B1x A0z B1x A1z", "B0x A1z B0x A0z", "B0x A1z B1x A1z"],
    ["B1x A0z B1x A0z", "B1x A0z B0x A1z", "B0x A1z B1x A0z", "B0x A1z B0x A1z"],
];

const Y_VS_Z: [[&str; 4]; 4] = [
    ["B0y A0z B0y A0z", "B0y A0z B0y A1z", "B0y A1z B0y A0z", "B0y A1z B0y A1z"],
    ["B0y A0z B1y A0z", "B0y A0z B1y A1z", "B0y A1z B1y A0z", "B0y A1z B1y A1z"],
    ["B1y A0z B0y A0z", "B1y A0z B0y A1z", "B1y A1z B0y A0z", "B1y A1z B0y A1z"],
    ["B1y A0z B1y A0z", "B1y A0z B1y A1z", "B1y A1z B1y A0z", "B1y A1z B1y A1z"],
];

fn parse_cell(s: &str) -> CellUnitary {
    let names: Vec<LocalUnitary> = s
        .split_whitespace()
        .map(|t| LocalUnitary::parse(t).expect("known unitary name"))
        .collect();
    assert_eq!(names.len(), 4, "cell `{s}` must name four unitaries");
    CellUnitary { first: (names[0], names[1]), second: (names[2], names[3]) }
}

fn block_index(a: Sign, b: Sign) -> usize {
    let bit = |s: Sign| usize::from(s == Sign::Minus);
    2 * bit(a) + bit(b)
}

/// Looks up the cell for a pair of encoding states, each given as
/// `(axis, sign on A, sign on B)`. Transposed queries return the same
/// unitary; outcome orientation is resolved by the caller.
pub fn lookup(s1: (Axis, Sign, Sign), s2: (Axis, Sign, Sign)) -> Table1Cell {
    if s1 == s2 {
        return Table1Cell::NotApplicable;
    }
    if s1.0 == s2.0 {
        return Table1Cell::QuantumDistinguishable;
    }
    let (row, col) = if s1.0 < s2.0 { (s1, s2) } else { (s2, s1) };
    let block = match (row.0, col.0) {
        (Axis::X, Axis::Y) => &X_VS_Y,
        (Axis::X, Axis::Z) => &X_VS_Z,
        (Axis::Y, Axis::Z) => &Y_VS_Z,
        _ => unreachable!("rows are ordered x < y < z"),
    };
    let cell = block[block_index(row.1, row.2)][block_index(col.1, col.2)];
    Table1Cell::Conjugate(parse_cell(cell))
}
