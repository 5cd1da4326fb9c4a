//! Dimensions of the nonsymmetric spaces `S` for each center dimension `k`,
//! and the known symmetric (Iwasawa) configurations.
//!
//! For `k ≤ 8` a nonsymmetric `S` exists in every dimension `j·d(k) + k + 1`
//! with `j ≥ j_min(k)`. The exceptions are `k = 1` (every `S` is complex
//! hyperbolic space) and `k = 3, 7`, whose smallest modules give quaternionic
//! and octonionic hyperbolic spaces.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{min_dimension, CliffordSpec, Multiplicity};
use crate::error::{Error, Result};

/// Largest `k` whose row is covered by the classical table.
pub const VERIFIED_MAX_K: usize = 8;

const BEYOND_RANGE: &str = "beyond the verified range k <= 8";

/// Smallest number of irreducible blocks giving a nonsymmetric space, if any.
fn j_min(k: usize) -> Option<usize> {
    match k {
        1 => None,
        3 | 7 => Some(2),
        _ => Some(1),
    }
}

/// `{j·d(k) + k + 1 : j = j_min + n, n = 0..=n_max}`.
pub fn nonsymmetric_dims(k: usize, n_max: usize) -> Result<Vec<usize>> {
    let d = min_dimension(k)?;
    Ok(match j_min(k) {
        None => Vec::new(),
        Some(j0) => (0..=n_max).map(|n| (j0 + n) * d + k + 1).collect(),
    })
}

/// One row of the table: `dim S = base + stride·n`, or no nonsymmetric space at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: usize,
    pub base: Option<usize>,
    pub stride: Option<usize>,
    /// Which configurations are symmetric.
    pub note: String,
    pub dims: Vec<usize>,
}

impl TableRow {
    pub fn new(k: usize, n_max: usize) -> Result<Self> {
        let d = min_dimension(k)?;
        let dims = nonsymmetric_dims(k, n_max)?;
        let mut note = match k {
            1 => "all symmetric (complex hyperbolic)".to_string(),
            3 => "isotypic modules symmetric (quaternionic hyperbolic)".to_string(),
            7 => "isotypic m = 8 symmetric (octonionic hyperbolic plane)".to_string(),
            _ => "none symmetric".to_string(),
        };
        if k > VERIFIED_MAX_K {
            note.push_str("; ");
            note.push_str(BEYOND_RANGE);
        }
        Ok(Self {
            k,
            base: dims.first().copied(),
            stride: j_min(k).map(|_| d),
            note,
            dims,
        })
    }

    /// `"7+4n"`, or `"—"` for an empty row.
    pub fn descriptor(&self) -> String {
        match (self.base, self.stride) {
            (Some(b), Some(s)) => format!("{b}+{s}n"),
            _ => "—".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    pub n_max: usize,
    pub rows: Vec<TableRow>,
}

/// The rows `k = 1..=8` expanded for `n = 0..=n_max`.
pub fn render_table(n_max: usize) -> DimensionTable {
    table_for(1..=VERIFIED_MAX_K, n_max).expect("k = 1..8 is valid")
}

/// Rows for arbitrary `k ≥ 1`; rows past `k = 8` carry a range flag in their note.
pub fn table_for(ks: impl IntoIterator<Item = usize>, n_max: usize) -> Result<DimensionTable> {
    let rows = ks
        .into_iter()
        .map(|k| TableRow::new(k, n_max))
        .collect::<Result<_>>()?;
    Ok(DimensionTable { n_max, rows })
}

impl DimensionTable {
    /// Aligned columns: `k`, the progression, the expanded dimensions, the note.
    pub fn to_text(&self) -> String {
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                let dims = if r.dims.is_empty() {
                    "—".to_string()
                } else {
                    r.dims
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                [r.k.to_string(), r.descriptor(), dims, r.note.clone()]
            })
            .collect();
        let header = ["k", "dim S", &format!("n = 0..{}", self.n_max), "symmetric"];
        let mut widths = header.map(|h| h.chars().count());
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cols: [&str; 4]| {
            let mut s = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                if i + 1 == cols.len() {
                    s.push_str(c);
                } else {
                    let pad = w - c.chars().count();
                    write!(s, "{c}{}  ", " ".repeat(pad)).unwrap();
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(header);
        for row in &cells {
            line([&row[0], &row[1], &row[2], &row[3]]);
        }
        out
    }

    /// One line per expanded dimension under the header `k,n,dim`.
    /// Rows without nonsymmetric spaces contribute no lines.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "n", "dim"]).unwrap();
        for row in &self.rows {
            for (n, d) in row.dims.iter().enumerate() {
                w.write_record([row.k.to_string(), n.to_string(), d.to_string()])
                    .unwrap();
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// Whether `spec` is one of the known symmetric families: `k = 1`; `k = 3`
/// with an isotypic module of any size; `k = 7` with `m = 8`.
pub fn expected_symmetric(spec: &CliffordSpec) -> bool {
    match (spec.k(), spec.multiplicity()) {
        (1, _) => true,
        (3, mult) => mult.is_isotypic(),
        (7, mult @ Multiplicity::Chiral { .. }) => mult.is_isotypic() && mult.total() == 1,
        _ => false,
    }
}

/// Every valid spec with `dim S ≤ max_dim`, ordered by `k` and then by multiplicity.
pub fn specs_up_to_dimension(max_dim: usize) -> Result<Vec<CliffordSpec>> {
    if max_dim < 4 {
        return Err(Error::Domain("the smallest space has dimension 4".into()));
    }
    let mut out = Vec::new();
    for k in 1..max_dim {
        let d = min_dimension(k)?;
        if d + k + 1 > max_dim {
            continue;
        }
        let max_total = (max_dim - k - 1) / d;
        for total in 1..=max_total {
            if crate::algebra::has_chirality(k) {
                for plus in (0..=total).rev() {
                    out.push(CliffordSpec::chiral(k, plus, total - plus)?);
                }
            } else {
                out.push(CliffordSpec::single(k, total)?);
            }
        }
    }
    Ok(out)
}
