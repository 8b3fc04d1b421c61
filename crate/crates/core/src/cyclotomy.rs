//! Cyclotomic classes of order `p^k + 1` in `GF(p^{2k})^*`, their
//! cyclotomic numbers and the Gauss-type sums `P_t`.
//!
//! `C_t = {ν^{(p^k+1)i + t}}`, with ν the induced primitive element of the
//! degree-`2k` subfield view. The class index of `x` is `log_ν(x) mod (p^k+1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, SubfieldView};
use crate::CycInt;

/// Cyclotomic numbers `(i, j)`, indexed `table[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycNumberTable {
    pub order: usize,
    pub table: Vec<Vec<u64>>,
}

impl CycNumberTable {
    pub fn total(&self) -> u64 {
        self.table.iter().flatten().sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.table[i].iter().sum()
    }

    /// CSV with header `i\j,0,...,p^k` and one row per `i`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i\\j");
        for j in 0..self.order {
            out.push_str(&format!(",{j}"));
        }
        out.push('\n');
        for (i, row) in self.table.iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// A table entry that disagrees with the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub i: usize,
    pub j: usize,
    pub got: i64,
    pub expected: i64,
}

/// Closed form of `(i, j)` for order `p^k + 1`, given `q = p^k`.
pub fn lemma1_value(q: u64, i: usize, j: usize) -> u64 {
    if i == 0 && j == 0 {
        q - 2
    } else if i != j && i != 0 && j != 0 {
        1
    } else {
        0
    }
}

/// Closed form of `P_t`: `p^k - 1` at `t = (p^k + 1)/2`, else `-1`.
pub fn pt_closed_form(q: u64, t: usize) -> i64 {
    if t as u64 == (q + 1) / 2 {
        q as i64 - 1
    } else {
        -1
    }
}

pub struct Cyclotomy<'a> {
    view: SubfieldView<'a>,
    q: u64,
}

impl<'a> Cyclotomy<'a> {
    /// `view` must be the degree-`2k` subfield (or a standalone `GF(p^{2k})`).
    pub fn new(view: SubfieldView<'a>) -> Result<Self> {
        let k = view.ctx().params().k;
        if view.degree() != 2 * k {
            return Err(Error::DegreeUnsupported { m: view.degree(), k });
        }
        let q = view.ctx().params().q1();
        Ok(Self { view, q })
    }

    /// Number of classes, `p^k + 1`.
    pub fn order(&self) -> usize {
        self.q as usize + 1
    }

    pub fn nu(&self) -> &Elem {
        self.view.generator()
    }

    pub fn class_index(&self, x: &Elem) -> Result<usize> {
        let e = self.view.discrete_log(x)?;
        Ok((e % (self.q + 1)) as usize)
    }

    /// Elements of `C_t`.
    pub fn class(&self, t: usize) -> Result<Vec<Elem>> {
        self.check_index(t)?;
        let ctx = self.view.ctx();
        let step = self.q + 1;
        Ok((0..self.q - 1)
            .map(|i| ctx.pow(self.nu(), step * i + t as u64))
            .collect())
    }

    fn check_index(&self, t: usize) -> Result<()> {
        if t >= self.order() {
            return Err(Error::IndexOutOfRange { index: t, bound: self.order() });
        }
        Ok(())
    }

    /// `(i, j)`: how many `x ∈ C_i` have `x + 1 ∈ C_j`, by direct count.
    pub fn cyclotomic_number(&self, i: usize, j: usize) -> Result<u64> {
        self.check_index(j)?;
        let ctx = self.view.ctx();
        let one = ctx.one();
        let mut count = 0;
        for x in self.class(i)? {
            let y = ctx.add(&x, &one);
            if !y.is_zero() && self.class_index(&y)? == j {
                count += 1;
            }
        }
        Ok(count)
    }

    fn table_for_shift(&self, delta: &Elem) -> CycNumberTable {
        let ctx = self.view.ctx();
        let order = self.order();
        let mut table = vec![vec![0u64; order]; order];
        for (e, x) in self.view.nonzero_elements().iter().enumerate() {
            let y = ctx.add(x, delta);
            if y.is_zero() {
                continue;
            }
            let i = e % order;
            let j = self.class_index(&y).expect("nonzero subfield element");
            table[i][j] += 1;
        }
        CycNumberTable { order, table }
    }

    /// All `(i, j)` in one pass over `GF(p^{2k})^*`.
    pub fn full_table(&self) -> CycNumberTable {
        self.table_for_shift(&self.view.ctx().one())
    }

    /// The same counts using `x - 1` in place of `x + 1`.
    pub fn full_table_minus(&self) -> CycNumberTable {
        self.table_for_shift(&self.view.ctx().from_int(-1))
    }

    /// Entries of the computed table that differ from the closed form.
    pub fn verify_lemma1(&self) -> Vec<Mismatch> {
        let t = self.full_table();
        let mut out = Vec::new();
        for (i, row) in t.table.iter().enumerate() {
            for (j, &got) in row.iter().enumerate() {
                let expected = lemma1_value(self.q, i, j);
                if got != expected {
                    out.push(Mismatch { i, j, got: got as i64, expected: expected as i64 });
                }
            }
        }
        out
    }

    /// `P_t = Σ_{x ∈ C_t} ω^{Tr_{2k}(x)}` for every `t`, exactly.
    pub fn pt_sums(&self) -> Vec<CycInt> {
        let p = self.view.ctx().p();
        let order = self.order();
        let mut counts = vec![vec![0u64; p as usize]; order];
        for (e, x) in self.view.nonzero_elements().iter().enumerate() {
            let tr = self.view.abs_trace(x).expect("subfield element");
            counts[e % order][tr as usize] += 1;
        }
        counts
            .iter()
            .map(|c| CycInt::from_residue_counts(p, c))
            .collect()
    }

    /// Classes whose `P_t` is not the closed-form rational integer.
    pub fn verify_pt(&self) -> Vec<Mismatch> {
        self.pt_sums()
            .iter()
            .enumerate()
            .filter_map(|(t, z)| {
                let expected = pt_closed_form(self.q, t);
                match z.as_integer() {
                    Some(v) if v == expected => None,
                    got => Some(Mismatch { i: t, j: t, got: got.unwrap_or(i64::MIN), expected }),
                }
            })
            .collect()
    }
}
