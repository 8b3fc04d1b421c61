//! Element text formats: `"c0,c1,...,c_{m-1}"` and `"g^e"` (meaning ξ^e).

use super::{Elem, FieldCtx};
use crate::error::{Error, Result};

impl FieldCtx {
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = |reason: String| Error::Parse { input: s.to_string(), reason };
        if let Some(exp) = s.strip_prefix("g^") {
            let e: i64 = exp.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let e = e.rem_euclid(self.order() as i64) as u64;
            return Ok(self.xi_pow(e));
        }
        let digits = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| bad(format!("{e}"))))
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&digits).map_err(|_| {
            bad(format!("expected at most {} digits below {}", self.degree(), self.p()))
        })
    }

    /// `"g^e"` for nonzero elements, `"0"` for zero.
    pub fn format_power(&self, x: &Elem) -> String {
        match self.log_or_none(x) {
            Some(e) => format!("g^{e}"),
            None => "0".to_string(),
        }
    }

    pub fn format_coeffs(&self, x: &Elem) -> String {
        x.coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}
