//! Unicast path augmentation over a layered deterministic network.
//!
//! Paths are grown one per iteration. Each iteration explores nodes from the
//! source looking for a channel sequence that stays linearly independent of
//! the already-committed paths at every layer cut. Two rewiring moves keep
//! the search complete: substituting a dependent used row for a fresh input
//! (the L_x-function) and swapping a used output out of a cut when a second
//! path reaches its node (the phi-function). The count of committed paths at
//! the first failed iteration is the min-cut value of the network.
//!
//! All nondeterministic choices resolve in ascending id order, so a given
//! network always yields the same paths and the same trace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::linalg::Matrix;
use crate::network::{InputId, Network, NodeId, OutputId, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathError {
    InvalidNetwork(Vec<Violation>),
    /// A seeded path set does not satisfy the path-set invariants.
    InvalidPaths(String),
    /// An update would install a rank-deficient wiring (bug signal).
    RankViolation { cut: usize },
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::InvalidNetwork(v) => {
                write!(f, "network violates the layered model: ")?;
                for (i, violation) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{violation}")?;
                }
                Ok(())
            }
            PathError::InvalidPaths(s) => write!(f, "invalid path set: {s}"),
            PathError::RankViolation { cut } => {
                write!(f, "wiring update at cut {cut} is not full rank")
            }
        }
    }
}

impl std::error::Error for PathError {}

/// One source-destination path: a channel per layer cut, in cut order.
pub type SdPath = Vec<(InputId, OutputId)>;

/// A set of linearly independent source-destination paths together with the
/// per-cut used edge view.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathSet {
    pub paths: Vec<SdPath>,
}

impl PathSet {
    pub fn k(&self) -> usize {
        self.paths.len()
    }

    /// Used edges at the 1-based layer cut, ascending by input.
    pub fn used_edges(&self, cut: usize) -> Vec<(InputId, OutputId)> {
        let mut v: Vec<(InputId, OutputId)> = self.paths.iter().map(|p| p[cut - 1]).collect();
        v.sort();
        v
    }

    pub fn used_inputs(&self, cut: usize) -> Vec<InputId> {
        self.used_edges(cut).into_iter().map(|(x, _)| x).collect()
    }

    pub fn used_outputs(&self, cut: usize) -> Vec<OutputId> {
        let mut v: Vec<OutputId> = self.paths.iter().map(|p| p[cut - 1].1).collect();
        v.sort();
        v
    }

    /// Every edge of every path, for rendering.
    pub fn all_edges(&self) -> Vec<(InputId, OutputId)> {
        self.paths.iter().flatten().copied().collect()
    }
}

/// Finds a maximum set of linearly independent source-destination paths; the
/// set size is the network's min-cut value.
pub fn find_paths(net: &Network) -> Result<PathSet, PathError> {
    let mut search = Search::new(net)?;
    search.run();
    Ok(search.paths())
}

/// The mutable state of one capacity search over an immutable network.
///
/// `Search` exposes the exploration steps individually so tests can drive a
/// single iteration from a seeded path set and inspect the trace.
pub struct Search<'a> {
    net: &'a Network,
    k: usize,
    /// Perceived used edges per cut (index = cut - 1). Between iterations
    /// every cut holds exactly `k` edges forming a full-rank matrix; during
    /// an iteration, cuts behind the exploration frontier hold `k + 1`.
    used: Vec<BTreeMap<InputId, OutputId>>,
    /// Undo journal of (cut, previous edge set) snapshots.
    journal: Vec<(usize, BTreeMap<InputId, OutputId>)>,
    node_marked: BTreeSet<NodeId>,
    input_marked: BTreeSet<InputId>,
    /// Inputs whose L_x-function already ran this iteration. Sticky even
    /// when the input mark is cleared for re-exploration.
    ml_done: BTreeSet<InputId>,
    /// Outputs whose phi-function already ran this iteration.
    phi_done: BTreeSet<OutputId>,
    trace_enabled: bool,
    trace: String,
    iteration: usize,
    events: u64,
    event_bound: u64,
}

impl<'a> Search<'a> {
    pub fn new(net: &'a Network) -> Result<Search<'a>, PathError> {
        let violations = net.validate();
        if !violations.is_empty() {
            return Err(PathError::InvalidNetwork(violations));
        }
        let mut search = Search {
            net,
            k: 0,
            used: vec![BTreeMap::new(); net.num_layers() - 1],
            journal: Vec::new(),
            node_marked: BTreeSet::new(),
            input_marked: BTreeSet::new(),
            ml_done: BTreeSet::new(),
            phi_done: BTreeSet::new(),
            trace_enabled: false,
            trace: String::new(),
            iteration: 0,
            events: 0,
            event_bound: 0,
        };
        search.reset_event_budget();
        Ok(search)
    }

    /// Per-iteration exploration cap: each node explores once, each input
    /// re-explores at most once per dependent-set listing and once per
    /// rewiring that frees it, so anything past this budget is a bug.
    fn reset_event_budget(&mut self) {
        let n_nodes = self.net.nodes().count() as u64;
        let ports = (self.net.total_inputs() + self.net.total_outputs()) as u64;
        self.events = 0;
        self.event_bound = 16 * (n_nodes + ports + 4) * (self.k as u64 + 2);
    }

    /// Starts from an existing set of linearly independent paths instead of
    /// from scratch. The set is checked against every path-set invariant.
    pub fn with_paths(net: &'a Network, paths: &PathSet) -> Result<Search<'a>, PathError> {
        let mut search = Search::new(net)?;
        let lambda = net.num_layers();
        let source = net.source().expect("validated");
        let dest = net.destination().expect("validated");
        for path in &paths.paths {
            if path.len() != lambda - 1 {
                return Err(PathError::InvalidPaths(format!(
                    "path length {} does not span {} cuts",
                    path.len(),
                    lambda - 1
                )));
            }
            for (c, &(x, y)) in path.iter().enumerate() {
                if net.coeff(x, y).is_none() {
                    return Err(PathError::InvalidPaths(format!("no channel ({x},{y})")));
                }
                if net.input_layer(x) != c + 1 {
                    return Err(PathError::InvalidPaths(format!(
                        "edge ({x},{y}) is not at cut {}",
                        c + 1
                    )));
                }
                if c == 0 && net.input_owner(x) != source {
                    return Err(PathError::InvalidPaths(format!("path does not start at the source: {x}")));
                }
                if c + 1 == lambda - 1 && net.output_owner(y) != dest {
                    return Err(PathError::InvalidPaths(format!("path does not end at the destination: {y}")));
                }
                if c > 0 && net.input_owner(x) != net.output_owner(path[c - 1].1) {
                    return Err(PathError::InvalidPaths(
                        "consecutive edges do not meet at one node".into(),
                    ));
                }
                if search.used[c].insert(x, y).is_some() {
                    return Err(PathError::InvalidPaths(format!("input {x} used twice")));
                }
            }
        }
        for cut in 1..lambda {
            let outs: BTreeSet<OutputId> = search.used[cut - 1].values().copied().collect();
            if outs.len() != paths.k() {
                return Err(PathError::InvalidPaths(format!("output used twice at cut {cut}")));
            }
            if !search.cut_matrix(cut).is_full_rank() {
                return Err(PathError::InvalidPaths(format!(
                    "used edges at cut {cut} are linearly dependent"
                )));
            }
        }
        search.k = paths.k();
        search.reset_event_budget();
        Ok(search)
    }

    pub fn enable_trace(&mut self) {
        self.trace_enabled = true;
        self.trace.push_str("detflow trace v1\n");
    }

    pub fn trace(&self) -> &str {
        &self.trace
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    /// Nodes marked during the most recent iteration. After the final failed
    /// iteration these form the source side of a minimum cut.
    pub fn marked_nodes(&self) -> Vec<NodeId> {
        self.node_marked.iter().copied().collect()
    }

    /// Used edges at a 1-based cut, ascending by input.
    pub fn used_edges(&self, cut: usize) -> Vec<(InputId, OutputId)> {
        self.used[cut - 1].iter().map(|(&x, &y)| (x, y)).collect()
    }

    fn tracef(&mut self, line: fmt::Arguments<'_>) {
        if self.trace_enabled {
            use fmt::Write;
            self.trace.write_fmt(line).unwrap();
            self.trace.push('\n');
        }
    }

    fn fmt_used(map: &BTreeMap<InputId, OutputId>) -> String {
        let inner: Vec<String> = map.iter().map(|(x, y)| format!("({x},{y})")).collect();
        format!("{{{}}}", inner.join(","))
    }

    fn event(&mut self) {
        self.events += 1;
        assert!(
            self.events <= self.event_bound,
            "exploration exceeded the per-iteration work bound ({} events); this is a bug",
            self.event_bound
        );
    }

    /// Runs iterations until one fails to reach the destination.
    pub fn run(&mut self) -> usize {
        while self.run_iteration() {}
        self.k
    }

    /// Attempts to add one more path. Returns whether it succeeded.
    pub fn run_iteration(&mut self) -> bool {
        self.iteration += 1;
        self.node_marked.clear();
        self.input_marked.clear();
        self.ml_done.clear();
        self.phi_done.clear();
        self.reset_event_budget();
        self.tracef(format_args!("iter-begin attempt={}", self.k + 1));
        let depth = self.journal.len();
        let source = self.net.source().expect("validated");
        let ok = self.explore_node(source);
        if ok {
            self.k += 1;
            self.journal.clear();
            self.assert_committed_state();
            let k = self.k;
            self.tracef(format_args!("path-committed k={k}"));
            self.tracef(format_args!("iter-end attempt={k} result=success"));
        } else {
            assert_eq!(self.journal.len(), depth, "failed iteration must unwind its journal");
            self.tracef(format_args!("iter-end attempt={} result=fail", self.k + 1));
        }
        ok
    }

    /// Transfer matrix of the perceived used edges at a 1-based cut.
    fn cut_matrix(&self, cut: usize) -> Matrix {
        let ins: Vec<InputId> = self.used[cut - 1].keys().copied().collect();
        let outs: Vec<OutputId> = self.used[cut - 1].values().copied().collect();
        self.net.transfer_matrix(&ins, &outs).expect("used edges sit on one cut")
    }

    fn output_used(&self, cut: usize, y: OutputId) -> bool {
        self.used[cut - 1].values().any(|&v| v == y)
    }

    /// Used outputs belonging to `node` at the given cut, ascending.
    fn used_outputs_at_node(&self, cut: usize, node: NodeId) -> Vec<OutputId> {
        let mut v: Vec<OutputId> = self.used[cut - 1]
            .values()
            .copied()
            .filter(|&y| self.net.output_owner(y) == node)
            .collect();
        v.sort();
        v
    }

    /// Whether adding row x and column y to the used matrix at `cut` raises
    /// its rank by one.
    fn extends_rank(&self, cut: usize, x: InputId, y: OutputId) -> bool {
        let base = self.cut_matrix(cut);
        let new_row: Vec<_> = base
            .col_labels()
            .iter()
            .map(|&c| self.net.coeff(x, OutputId(c)).unwrap_or(crate::field::Fe::ZERO))
            .collect();
        let new_col: Vec<_> = base
            .row_labels()
            .iter()
            .map(|&r| self.net.coeff(InputId(r), y).unwrap_or(crate::field::Fe::ZERO))
            .collect();
        let corner = self.net.coeff(x, y).unwrap_or(crate::field::Fe::ZERO);
        base.is_full_rank_extension(x.0, &new_row, y.0, &new_col, corner)
            .expect("used matrix is full rank")
    }

    /// Installs a new used edge set at a 1-based cut, journaling the previous
    /// one. Fails if the new wiring is not full rank.
    pub fn update(&mut self, cut: usize, new_used: BTreeMap<InputId, OutputId>) -> Result<(), PathError> {
        let ins: Vec<InputId> = new_used.keys().copied().collect();
        let outs: Vec<OutputId> = new_used.values().copied().collect();
        let outs_set: BTreeSet<OutputId> = outs.iter().copied().collect();
        let full_rank = outs_set.len() == ins.len()
            && self
                .net
                .transfer_matrix(&ins, &outs)
                .map(|t| t.is_full_rank())
                .unwrap_or(false);
        if !full_rank {
            return Err(PathError::RankViolation { cut });
        }
        let prev = std::mem::replace(&mut self.used[cut - 1], new_used);
        self.journal.push((cut, prev));
        if self.trace_enabled {
            let s = Self::fmt_used(&self.used[cut - 1]);
            self.tracef(format_args!("update cut={cut} used={s}"));
        }
        Ok(())
    }

    /// Undoes the most recent update.
    pub fn restore(&mut self) {
        let (cut, prev) = self.journal.pop().expect("restore without a matching update");
        self.used[cut - 1] = prev;
        if self.trace_enabled {
            let s = Self::fmt_used(&self.used[cut - 1]);
            self.tracef(format_args!("restore cut={cut} used={s}"));
        }
    }

    /// Explores a node: tries to extend the partial path from it toward the
    /// destination through each of its unused, unmarked inputs. Returns
    /// whether the destination was reached.
    pub fn explore_node(&mut self, node: NodeId) -> bool {
        if self.node_marked.contains(&node) {
            return false;
        }
        let layer = match self.net.node(node) {
            Some(n) => n.layer,
            None => return false,
        };
        if layer == self.net.num_layers() {
            return false;
        }
        self.node_marked.insert(node);
        self.event();
        self.tracef(format_args!("explore-node node={node}"));
        let cut = layer;
        let mut inputs = self.net.node(node).expect("checked").inputs.clone();
        inputs.sort();
        for x in inputs {
            if self.used[cut - 1].contains_key(&x) {
                continue;
            }
            if self.input_marked.contains(&x) {
                continue;
            }
            if self.explore_input(x) {
                return true;
            }
        }
        false
    }

    /// Explores an input: walks its channels in ascending output order,
    /// running the L_x-function on used outputs and rank-extension checks on
    /// unused ones. Returns whether the destination was reached.
    pub fn explore_input(&mut self, x: InputId) -> bool {
        if self.input_marked.contains(&x) {
            return false;
        }
        self.input_marked.insert(x);
        self.event();
        self.tracef(format_args!("explore-input x={x}"));
        let cut = self.net.input_layer(x);
        debug_assert!(!self.used[cut - 1].contains_key(&x), "used inputs are not explored");
        let channels: Vec<(OutputId, crate::field::Fe)> = self.net.channels_from(x).to_vec();
        for (y, _) in channels {
            if self.output_used(cut, y) {
                self.tracef(format_args!("edge x={x} y={y} used"));
                if !self.ml_done.contains(&x) && self.lx_function(x) {
                    return true;
                }
            } else if self.extends_rank(cut, x, y) {
                self.tracef(format_args!("edge x={x} y={y} extend"));
                let target = self.net.output_owner(y);
                let mut extended = self.used[cut - 1].clone();
                extended.insert(x, y);
                if Some(target) == self.net.destination() {
                    self.update(cut, extended).expect("extension checked");
                    return true;
                }
                if !self.node_marked.contains(&target) {
                    for y_k in self.used_outputs_at_node(cut, target) {
                        if self.phi_rewire(cut, Some((x, y)), y_k) {
                            return true;
                        }
                    }
                    self.update(cut, extended).expect("extension checked");
                    if self.explore_node(target) {
                        return true;
                    }
                    self.restore();
                }
            } else {
                self.tracef(format_args!("edge x={x} y={y} reject"));
            }
        }
        false
    }

    /// The L_x-function: finds the minimal set of used rows that the new
    /// input's row depends on and tries substituting each of them. Each
    /// substitution frees a used input at another node, moving the dangling
    /// partial path there. Runs at most once per input per iteration.
    pub fn lx_function(&mut self, x: InputId) -> bool {
        if self.ml_done.contains(&x) {
            return false;
        }
        self.ml_done.insert(x);
        self.event();
        let cut = self.net.input_layer(x);
        let base = self.cut_matrix(cut);
        let x_row: Vec<_> = base
            .col_labels()
            .iter()
            .map(|&c| self.net.coeff(x, OutputId(c)).unwrap_or(crate::field::Fe::ZERO))
            .collect();
        let l: Vec<InputId> = base
            .find_l(&x_row)
            .expect("used matrix is full rank")
            .into_iter()
            .map(InputId)
            .collect();
        if self.trace_enabled {
            let inner: Vec<String> = l.iter().map(|i| i.to_string()).collect();
            self.tracef(format_args!("lx x={x} cut={cut} L={{{}}}", inner.join(",")));
        }
        for x_k in l {
            let mut rows: Vec<InputId> = self.used[cut - 1].keys().copied().collect();
            rows.retain(|&r| r != x_k);
            rows.push(x);
            let cols: Vec<OutputId> = self.used[cut - 1].values().copied().collect();
            let t = self.net.transfer_matrix(&rows, &cols).expect("one cut");
            // Substituting any member of L for the new row keeps the matrix
            // full rank, so a support matching always exists.
            let matching = t
                .perfect_matching()
                .expect("substituting a dependent-set member preserves full rank");
            let new_used: BTreeMap<InputId, OutputId> = matching
                .pairs()
                .map(|(r, c)| (InputId(r), OutputId(c)))
                .collect();
            self.update(cut, new_used).expect("matching is full rank");
            if self.continue_from_freed(x_k) {
                return true;
            }
            self.restore();
        }
        false
    }

    /// The phi-function at the named used output: the partial path that
    /// arrived at this output's node takes over the established path's
    /// downstream half, and the established path's upstream half is rewired
    /// to free some other input, where exploration resumes. Runs at most
    /// once per output per iteration.
    ///
    /// `new_edge` carries the arriving channel when the node was reached
    /// through a fresh rank-extending edge; its row is then not a
    /// substitution candidate. When the node was freed by a rewiring there
    /// is no arriving channel and every used row is a candidate.
    fn phi_rewire(&mut self, cut: usize, new_edge: Option<(InputId, OutputId)>, y_k: OutputId) -> bool {
        if self.phi_done.contains(&y_k) {
            return false;
        }
        self.phi_done.insert(y_k);
        self.event();
        self.tracef(format_args!("phi cut={cut} y={y_k}"));
        let mut rows: Vec<InputId> = self.used[cut - 1].keys().copied().collect();
        let deletable: Vec<InputId> = rows.clone();
        let mut cols: Vec<OutputId> = self
            .used[cut - 1]
            .values()
            .copied()
            .filter(|&y| y != y_k)
            .collect();
        if let Some((xi, yj)) = new_edge {
            rows.push(xi);
            cols.push(yj);
        }
        let t = match self.net.transfer_matrix(&rows, &cols) {
            Ok(t) => t,
            Err(_) => return false,
        };
        for x_m in deletable {
            let sub = t.delete_row(x_m.0).expect("row present");
            if !sub.is_full_rank() {
                continue;
            }
            let matching = sub.perfect_matching().expect("full rank");
            let new_used: BTreeMap<InputId, OutputId> = matching
                .pairs()
                .map(|(r, c)| (InputId(r), OutputId(c)))
                .collect();
            self.update(cut, new_used).expect("matching is full rank");
            if self.continue_from_freed(x_m) {
                return true;
            }
            self.restore();
        }
        false
    }

    /// Public phi-function entry matching the exploration step where a fresh
    /// rank-extending edge (x_i, y_j) arrives at a node that an established
    /// path enters through used output y_k.
    pub fn phi_function(&mut self, x_i: InputId, y_j: OutputId, y_k: OutputId) -> bool {
        let cut = self.net.input_layer(x_i);
        self.phi_rewire(cut, Some((x_i, y_j)), y_k)
    }

    /// Resumes exploration after a rewiring freed input `x_m`. An unvisited
    /// node is explored whole (running the phi-function first on each of its
    /// used outputs); at a visited node only the freed input is re-explored,
    /// clearing its mark if necessary.
    fn continue_from_freed(&mut self, x_m: InputId) -> bool {
        let node = self.net.input_owner(x_m);
        if !self.node_marked.contains(&node) {
            let layer = self.net.node(node).expect("owner").layer;
            if layer > 1 {
                for y in self.used_outputs_at_node(layer - 1, node) {
                    if self.phi_rewire(layer - 1, None, y) {
                        return true;
                    }
                }
            }
            self.explore_node(node)
        } else {
            self.input_marked.remove(&x_m);
            self.explore_input(x_m)
        }
    }

    /// Reconstructs the committed paths by walking each node's bijection
    /// between used arrivals and used departures in ascending order.
    pub fn paths(&self) -> PathSet {
        let lambda = self.net.num_layers();
        if self.k == 0 {
            return PathSet::default();
        }
        let mut paths = Vec::with_capacity(self.k);
        let first: Vec<(InputId, OutputId)> = self.used[0].iter().map(|(&x, &y)| (x, y)).collect();
        assert_eq!(first.len(), self.k, "cut 1 must carry every path");
        for &(x0, y0) in &first {
            let mut path = vec![(x0, y0)];
            let mut arrival = y0;
            for cut in 2..lambda {
                let node = self.net.output_owner(arrival);
                let arrivals = self.used_outputs_at_node(cut - 1, node);
                let departures: Vec<InputId> = {
                    let mut v: Vec<InputId> = self.used[cut - 1]
                        .keys()
                        .copied()
                        .filter(|&i| self.net.input_owner(i) == node)
                        .collect();
                    v.sort();
                    v
                };
                assert_eq!(
                    arrivals.len(),
                    departures.len(),
                    "node {node} must balance used arrivals and departures"
                );
                let idx = arrivals.iter().position(|&a| a == arrival).expect("arrival listed");
                let x = departures[idx];
                let y = self.used[cut - 1][&x];
                path.push((x, y));
                arrival = y;
            }
            paths.push(path);
        }
        PathSet { paths }
    }

    /// Committed-state invariants: every cut carries k edges of full rank
    /// and every intermediate node balances arrivals with departures.
    fn assert_committed_state(&self) {
        for cut in 1..self.net.num_layers() {
            assert_eq!(self.used[cut - 1].len(), self.k, "cut {cut} edge count");
            let outs: BTreeSet<OutputId> = self.used[cut - 1].values().copied().collect();
            assert_eq!(outs.len(), self.k, "cut {cut} output reuse");
            assert!(self.cut_matrix(cut).is_full_rank(), "cut {cut} wiring must stay full rank");
        }
        // The walk in paths() asserts per-node balance.
        let _ = self.paths();
    }
}
