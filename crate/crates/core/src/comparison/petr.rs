//! From a pointwise counting inequality to a witness `(V_j) ≺_n U`.
//!
//! With `D` finite symmetric, if every `x` satisfies
//! `Σ_j |{g ∈ D² : g·x ∈ V_j}| < (n+1)·|{g ∈ D : g·x ∈ U^{-ε}}|`, the depth-`d`
//! cells of the `V_j` can be sent by elements of `D` into `n + 1` copies of
//! `U^{-ε}` with distinct images per copy. The assignment is a perfect
//! matching of the cells into (copy, image prefix) slots.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::matching::hopcroft_karp;
use super::witness::{Witness, WitnessEntry};
use crate::boundary::Clopen;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::word::Word;
use crate::Rational;

/// Default number of refinement levels tried beyond the starting depth.
pub const DEFAULT_EXTRA_DEPTH: usize = 8;

/// Extra refinement levels allowed, from `PARATOWER_MAX_DEPTH` when set.
pub fn depth_cap_from_env() -> usize {
    std::env::var("PARATOWER_MAX_DEPTH").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_EXTRA_DEPTH)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingData {
    #[serde(rename = "D")]
    pub d: Vec<Element>,
    #[serde(with = "crate::scalar::as_string")]
    pub eps: Rational,
    #[serde(rename = "V")]
    pub sources: Vec<Clopen>,
    #[serde(rename = "U")]
    pub target: Clopen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub witness: Witness,
    pub depth: usize,
    pub prefix_len: usize,
    pub cells: usize,
}

fn distinct(xs: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

impl CountingData {
    fn fibers(&self) -> usize {
        self.target.fiber_count()
    }

    pub fn d_squared(&self) -> Vec<Element> {
        distinct(self.d.iter().flat_map(|x| self.d.iter().map(move |y| x.mul(y))))
    }

    fn check_shape(&self) -> Result<()> {
        if let Some(g) = self.d.iter().find(|g| !self.d.contains(&g.inverse())) {
            return Err(Error::Invalid(format!("D is not symmetric: {g} has no inverse in it")));
        }
        if self.sources.iter().any(|v| v.fiber_count() != self.fibers()) {
            return Err(Error::Invalid("sets live on different spaces".into()));
        }
        Ok(())
    }

    /// Checks the counting inequality on every cell of the common refinement
    /// of the sets `g⁻¹·V_j` (`g ∈ D²`) and `g⁻¹·U^{-ε}` (`g ∈ D`).
    pub fn check(&self, n: usize) -> Result<()> {
        self.check_shape()?;
        let shrunk = self.target.shrink(self.eps);
        let d2 = self.d_squared();
        let mut sets = Vec::new();
        for g in &d2 {
            let g_inv = g.inverse();
            sets.extend(self.sources.iter().map(|v| v.act(&g_inv)));
        }
        let split = sets.len();
        sets.extend(self.d.iter().map(|g| shrunk.act(&g.inverse())));
        let refs: Vec<&Clopen> = sets.iter().collect();
        for (fiber, w, vals) in Clopen::common_cells(&refs) {
            let lhs = vals[..split].iter().filter(|&&b| b).count();
            let rhs = (n + 1) * vals[split..].iter().filter(|&&b| b).count();
            if lhs >= rhs {
                let cell = if self.fibers() > 1 { format!("[{w}]x{fiber}") } else { format!("[{w}]") };
                return Err(Error::HypothesisViolated { cell, lhs, rhs });
            }
        }
        Ok(())
    }
}

/// `(V_j) ≺_n U`, after checking the counting hypothesis exactly. Depths from
/// the depth of the sets up to `extra_depth` further levels are tried.
pub fn petr_assign(data: &CountingData, n: usize, extra_depth: usize) -> Result<Assignment> {
    data.check(n)?;
    let k = data.fibers();
    let shrunk = data.target.shrink(data.eps);
    let start = data.sources.iter().map(Clopen::depth).chain([shrunk.depth()]).max().unwrap_or(0).max(1);

    for depth in start..=start + extra_depth {
        let mut cells: Vec<(usize, usize, Word)> = Vec::new();
        for (j, v) in data.sources.iter().enumerate() {
            cells.extend(v.refine(depth)?.into_iter().map(|(f, w)| (j, f, w)));
        }
        // images of each cell that are whole cylinders inside U^{-ε}
        let images: Vec<Vec<(usize, usize, Word)>> = cells
            .iter()
            .map(|(_, f, w)| {
                data.d
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.free_part().is_some_and(|gw| gw.cancellation(w) < w.len()))
                    .filter_map(|(gi, g)| {
                        let image = g.free_part().expect("checked").mul(w);
                        let fiber = (f + g.finite_part() as usize) % k;
                        (shrunk.contains_prefix(fiber, &image) == Some(true)).then_some((gi, fiber, image))
                    })
                    .collect()
            })
            .collect();
        if images.iter().any(Vec::is_empty) {
            continue;
        }
        let mut lengths: Vec<usize> = images.iter().flatten().map(|(_, _, w)| w.len()).collect();
        lengths.sort_unstable();
        lengths.dedup();

        for &len in lengths.iter().rev() {
            let mut slots: HashMap<(usize, usize, Word), usize> = HashMap::new();
            let mut slot_keys = Vec::new();
            let mut adj = vec![Vec::new(); cells.len()];
            let mut edge_info: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cells.len()];
            for (c, imgs) in images.iter().enumerate() {
                for (gi, fiber, image) in imgs.iter().filter(|(_, _, w)| w.len() >= len) {
                    for color in 0..=n {
                        let key = (color, *fiber, image.prefix(len));
                        let next = slots.len();
                        let id = *slots.entry(key.clone()).or_insert_with(|| {
                            slot_keys.push(key);
                            next
                        });
                        adj[c].push(id);
                        edge_info[c].push((*gi, color));
                    }
                }
            }
            let matching = hopcroft_karp(&adj, slots.len());
            if matching.iter().any(Option::is_none) {
                continue;
            }
            let mut entries = Vec::with_capacity(cells.len());
            for (c, m) in matching.iter().enumerate() {
                let r = m.expect("perfect");
                let pos = adj[c].iter().position(|&x| x == r).expect("matched along an edge");
                let (gi, color) = edge_info[c][pos];
                let (j, f, w) = &cells[c];
                entries.push(WitnessEntry { source: *j, piece: Clopen::cylinder_in(k, *f, w), g: data.d[gi].clone(), color });
            }
            let witness = Witness { sources: data.sources.clone(), targets: vec![data.target.clone()], copies: n + 1, entries };
            witness.assert_valid("counting assignment")?;
            return Ok(Assignment { witness, depth, prefix_len: len, cells: cells.len() });
        }
    }
    Err(Error::DepthCapExceeded { cap: start + extra_depth })
}
