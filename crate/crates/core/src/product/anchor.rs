//! Anchor decoding.
//!
//! iBDD with per-component status. A component whose BDD result is applied
//! becomes an anchor. A later correction that would flip a bit owned by a
//! crossing anchor is a conflict: it is blocked and the proposer frozen,
//! unless the anchor has now collected more than `threshold` distinct
//! conflicts, in which case the anchor is backtracked (its flips undone).

use super::{CodeArray, ComponentId, DecoderResult, OpCounters, ProductCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentStatus {
    Normal,
    Anchor,
    Frozen,
}

/// Bookkeeping shared by all components of one frame.
#[derive(Clone, Debug)]
pub struct AnchorState {
    pub status: Vec<ComponentStatus>,
    /// For each anchor, the components that conflicted with it.
    pub conflicts: Vec<Vec<ComponentId>>,
    /// For each frozen component, the anchors that block it.
    pub frozen_by: Vec<Vec<ComponentId>>,
    /// Cells `(row, col)` flipped by each anchor since it became one.
    pub applied: Vec<Vec<(usize, usize)>>,
    pub backtracks: usize,
}

impl AnchorState {
    fn new(components: usize) -> Self {
        Self {
            status: vec![ComponentStatus::Normal; components],
            conflicts: vec![Vec::new(); components],
            frozen_by: vec![Vec::new(); components],
            applied: vec![Vec::new(); components],
            backtracks: 0,
        }
    }

    fn unfreeze_all(&mut self) {
        for (s, f) in self.status.iter_mut().zip(self.frozen_by.iter_mut()) {
            if *s == ComponentStatus::Frozen {
                *s = ComponentStatus::Normal;
            }
            f.clear();
        }
    }

    fn backtrack(&mut self, anchor: ComponentId, array: &mut CodeArray) {
        for (i, j) in self.applied[anchor].drain(..) {
            array.flip(i, j);
        }
        self.status[anchor] = ComponentStatus::Normal;
        self.backtracks += 1;
        for c in std::mem::take(&mut self.conflicts[anchor]) {
            self.frozen_by[c].retain(|&a| a != anchor);
            if self.status[c] == ComponentStatus::Frozen && self.frozen_by[c].is_empty() {
                self.status[c] = ComponentStatus::Normal;
            }
        }
    }
}

/// Anchor decoding with backtracking threshold `threshold`.
pub fn anchor_decode(pc: &ProductCode, received: &CodeArray, max_iterations: usize, threshold: usize) -> DecoderResult {
    anchor_decode_with_state(pc, received, max_iterations, threshold).0
}

/// As [`anchor_decode`], also returning the final bookkeeping.
pub fn anchor_decode_with_state(
    pc: &ProductCode,
    received: &CodeArray,
    max_iterations: usize,
    threshold: usize,
) -> (DecoderResult, AnchorState) {
    let n = pc.n();
    let code = pc.component();
    let mut array = received.clone();
    let mut state = AnchorState::new(2 * n);
    let mut ops = OpCounters::default();
    let mut word = vec![0u8; n];
    let mut iterations_used = 0;
    let mut converged = false;

    for _ in 0..max_iterations {
        iterations_used += 1;
        state.unfreeze_all();
        for id in 0..2 * n {
            if state.status[id] == ComponentStatus::Frozen {
                continue;
            }
            // Each backtrack removes an anchor, so this terminates.
            loop {
                read_component(&array, id, &mut word);
                ops.bdd_calls += 1;
                let Some(flips) = code.bdd_flips(&word) else { break };
                let mut crossing: Vec<ComponentId> = flips
                    .iter()
                    .map(|&p| crossing_component(n, id, p))
                    .filter(|&c| state.status[c] == ComponentStatus::Anchor)
                    .collect();
                crossing.dedup();
                if crossing.is_empty() {
                    if state.status[id] != ComponentStatus::Anchor {
                        state.applied[id].clear();
                        state.status[id] = ComponentStatus::Anchor;
                    }
                    for &p in &flips {
                        let cell = cell_of(n, id, p);
                        array.flip(cell.0, cell.1);
                        state.applied[id].push(cell);
                    }
                    break;
                }
                let mut blocked_by = Vec::new();
                for a in crossing {
                    if !state.conflicts[a].contains(&id) {
                        state.conflicts[a].push(id);
                    }
                    if state.conflicts[a].len() > threshold {
                        state.backtrack(a, &mut array);
                    } else {
                        blocked_by.push(a);
                    }
                }
                if !blocked_by.is_empty() {
                    if state.status[id] != ComponentStatus::Anchor {
                        state.status[id] = ComponentStatus::Frozen;
                        state.frozen_by[id] = blocked_by;
                    }
                    break;
                }
                // Every conflicting anchor was backtracked; the word changed.
            }
        }
        if pc.is_codeword(&array) {
            converged = true;
            break;
        }
    }
    (DecoderResult { array, iterations_used, converged, ops }, state)
}

#[inline]
fn read_component(array: &CodeArray, id: ComponentId, out: &mut [u8]) {
    let n = array.n();
    if id < n {
        out.copy_from_slice(array.row(id));
    } else {
        array.col_into(id - n, out);
    }
}

/// The component crossing `id` at its position `p`.
#[inline]
fn crossing_component(n: usize, id: ComponentId, p: usize) -> ComponentId {
    if id < n {
        n + p
    } else {
        p
    }
}

#[inline]
fn cell_of(n: usize, id: ComponentId, p: usize) -> (usize, usize) {
    if id < n {
        (id, p)
    } else {
        (p, id - n)
    }
}
