use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{DecodeResult, Decoder};
use crate::codes::{CssCode, Syndrome};
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOperator;

/// Largest number of defects per check type handled by the exact matcher.
pub const MAX_DEFECTS: usize = 24;

const INF: u32 = u32::MAX / 4;
const TO_BOUNDARY: u8 = u8::MAX;

/// Decoding graph of one check matrix: checks are vertices, qubits are
/// edges. A qubit seen by a single check is an edge to the shared boundary
/// vertex. Every edge has unit weight.
#[derive(Clone, Debug)]
pub struct MatchingGraph {
    num_checks: usize,
    num_qubits: usize,
    /// `(neighbour, qubit)` sorted ascending; the boundary is vertex `num_checks`.
    adj: Vec<Vec<(usize, usize)>>,
    has_boundary: bool,
}

struct Tree {
    dist: Vec<u32>,
    parent: Vec<Option<(usize, usize)>>,
}

impl MatchingGraph {
    /// Fails when some qubit is covered by more than two checks.
    pub fn new(h: &BitMatrix) -> Result<Self> {
        let r = h.num_rows();
        let n = h.num_cols();
        let mut adj = vec![Vec::new(); r + 1];
        let mut has_boundary = false;
        for q in 0..n {
            let checks: Vec<usize> = (0..r).filter(|&c| h.get(c, q)).collect();
            let (a, b) = match checks.as_slice() {
                [] => continue,
                [a] => {
                    has_boundary = true;
                    (*a, r)
                }
                [a, b] => (*a, *b),
                _ => {
                    return Err(Error::Structural(format!(
                        "qubit {q} is covered by {} checks; matching needs at most 2",
                        checks.len()
                    )))
                }
            };
            adj[a].push((b, q));
            adj[b].push((a, q));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(MatchingGraph {
            num_checks: r,
            num_qubits: n,
            adj,
            has_boundary,
        })
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    fn boundary(&self) -> usize {
        self.num_checks
    }

    fn bfs(&self, source: usize) -> Tree {
        let v = self.adj.len();
        let mut dist = vec![INF; v];
        let mut parent = vec![None; v];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &(w, q) in &self.adj[u] {
                if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some((u, q));
                    queue.push_back(w);
                }
            }
        }
        Tree { dist, parent }
    }

    /// Qubits on the tree path from the source to `target`.
    fn trace(&self, tree: &Tree, mut target: usize, out: &mut BitVec) {
        while let Some((prev, q)) = tree.parent[target] {
            out.flip(q);
            target = prev;
        }
    }

    /// Minimum-weight set of qubits whose boundary is exactly `defects`.
    ///
    /// Pairs are chosen by an exact dynamic program over defect subsets: the
    /// lowest unmatched defect goes to the boundary or to a later defect,
    /// options tried in that order and replaced only on strict improvement.
    pub fn decode(&self, syndrome: &BitVec) -> Result<BitVec> {
        check_len(self.num_checks, syndrome.len())?;
        let defects: Vec<usize> = syndrome.iter_ones().collect();
        let k = defects.len();
        let mut correction = BitVec::zeros(self.num_qubits);
        if k == 0 {
            return Ok(correction);
        }
        if k > MAX_DEFECTS {
            return Err(Error::Undecodable(format!("{k} defects exceed the exact matcher limit of {MAX_DEFECTS}")));
        }
        let trees: Vec<Tree> = defects.iter().map(|&d| self.bfs(d)).collect();
        let b = self.boundary();
        let to_boundary: Vec<u32> = trees
            .iter()
            .map(|t| if self.has_boundary { t.dist[b] } else { INF })
            .collect();

        let full = (1usize << k) - 1;
        let mut cost = vec![INF; full + 1];
        let mut choice = vec![TO_BOUNDARY; full + 1];
        cost[0] = 0;
        for mask in 1..=full {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut best = to_boundary[i].saturating_add(cost[rest]);
            let mut pick = TO_BOUNDARY;
            let mut others = rest;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let c = trees[i].dist[defects[j]].saturating_add(cost[rest & !(1 << j)]);
                if c < best {
                    best = c;
                    pick = j as u8;
                }
            }
            cost[mask] = best.min(INF);
            choice[mask] = pick;
        }
        if cost[full] >= INF {
            return Err(Error::Undecodable("defects cannot be matched".into()));
        }

        let mut mask = full;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            mask &= !(1 << i);
            match choice[mask | (1 << i)] {
                TO_BOUNDARY => self.trace(&trees[i], b, &mut correction),
                j => {
                    let j = j as usize;
                    self.trace(&trees[i], defects[j], &mut correction);
                    mask &= !(1 << j);
                }
            }
        }
        Ok(correction)
    }
}

/// Minimum-weight matching decoder for codes whose qubits each touch at
/// most two checks of either type (rotated surface codes, repetition codes).
/// X and Z errors are matched independently with unit edge weights.
#[derive(Clone, Debug)]
pub struct MwpmDecoder {
    code: CssCode,
    /// Matches bit flips (`h_z` syndrome).
    x_graph: MatchingGraph,
    /// Matches phase flips (`h_x` syndrome).
    z_graph: MatchingGraph,
    prior: f64,
}

impl MwpmDecoder {
    /// `prior` is recorded but edges are unweighted.
    pub fn new(code: &CssCode, prior: f64) -> Result<Self> {
        Ok(MwpmDecoder {
            code: code.clone(),
            x_graph: MatchingGraph::new(code.h_z())?,
            z_graph: MatchingGraph::new(code.h_x())?,
            prior,
        })
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }
}

impl Decoder for MwpmDecoder {
    fn code(&self) -> &CssCode {
        &self.code
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecodeResult> {
        let x = self.x_graph.decode(&syndrome.z_checks)?;
        let z = self.z_graph.decode(&syndrome.x_checks)?;
        Ok(DecodeResult::exact(PauliOperator::from_bits(x, z)?))
    }
}
