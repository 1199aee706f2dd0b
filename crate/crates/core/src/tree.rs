//! Observation tree: a prefix tree of traces whose nodes carry optional
//! output labels, trace counts, and red/blue/white colors. Red nodes form
//! the confirmed core, blue nodes the fringe of merge candidates (the
//! non-red children of red nodes).

use crate::alphabet::{Alphabet, LabeledTrace, Symbol, Trace};
use crate::error::TreeError;

pub type NodeId = u32;
pub const NO_NODE: NodeId = u32::MAX;
pub const NO_LABEL: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Blue,
    White,
}

pub(crate) struct Node {
    pub label: u16, // NO_LABEL if unknown
    pub parent: NodeId,
    pub incoming: Symbol,
    pub trace_count: u64,
    pub color: Color,
    pub children: Box<[NodeId]>,
}

pub struct ObservationTree {
    input: Alphabet,
    output: Alphabet,
    nodes: Vec<Node>,
    reds: Vec<NodeId>,
    labeled_count: u64,
    /// Output-label histogram over all labeled nodes; drives the default
    /// output of unlabeled hypothesis states.
    label_counts: Vec<u64>,
}

impl ObservationTree {
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        let mut tree = ObservationTree {
            input,
            output,
            nodes: Vec::new(),
            reds: Vec::new(),
            labeled_count: 0,
            label_counts: vec![0; output.size() as usize],
        };
        tree.alloc(NO_NODE, 0);
        tree.nodes[0].color = Color::Red;
        tree.reds.push(0);
        tree
    }

    fn alloc(&mut self, parent: NodeId, incoming: Symbol) -> NodeId {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node {
            label: NO_LABEL,
            parent,
            incoming,
            trace_count: 0,
            color: Color::White,
            children: vec![NO_NODE; self.input.size() as usize].into_boxed_slice(),
        });
        id
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the root always exists
    }

    pub fn input_alphabet(&self) -> Alphabet {
        self.input
    }

    pub fn output_alphabet(&self) -> Alphabet {
        self.output
    }

    pub fn child(&self, node: NodeId, symbol: Symbol) -> NodeId {
        self.nodes[node as usize].children[symbol as usize]
    }

    pub fn label(&self, node: NodeId) -> Option<Symbol> {
        let l = self.nodes[node as usize].label;
        (l != NO_LABEL).then_some(l)
    }

    pub(crate) fn raw_label(&self, node: NodeId) -> u16 {
        self.nodes[node as usize].label
    }

    pub fn trace_count(&self, node: NodeId) -> u64 {
        self.nodes[node as usize].trace_count
    }

    pub fn color(&self, node: NodeId) -> Color {
        self.nodes[node as usize].color
    }

    pub fn is_red(&self, node: NodeId) -> bool {
        self.nodes[node as usize].color == Color::Red
    }

    /// Red core in promotion order.
    pub fn reds(&self) -> &[NodeId] {
        &self.reds
    }

    /// Number of distinct labeled traces stored.
    pub fn labeled_count(&self) -> u64 {
        self.labeled_count
    }

    /// The most frequent output label over all labeled nodes, smallest
    /// symbol on ties; symbol 0 when nothing is labeled yet.
    pub fn majority_label(&self) -> Symbol {
        let mut best = 0usize;
        for (s, &c) in self.label_counts.iter().enumerate() {
            if c > self.label_counts[best] {
                best = s;
            }
        }
        best as Symbol
    }

    /// Path from the root to `node`.
    pub fn access_trace(&self, node: NodeId) -> Trace {
        let mut symbols = Vec::new();
        let mut cur = node;
        while cur != 0 {
            let n = &self.nodes[cur as usize];
            symbols.push(n.incoming);
            cur = n.parent;
        }
        symbols.reverse();
        Trace::new(symbols)
    }

    /// Inserts a labeled trace, creating the path as needed and bumping
    /// trace counts along it. Relabeling an endpoint with a different label
    /// is an error: the data is assumed deterministic.
    pub fn add_trace(&mut self, rec: &LabeledTrace) -> Result<NodeId, TreeError> {
        rec.trace.valid_under(&self.input)?;
        let mut cur: NodeId = 0;
        self.nodes[0].trace_count += 1;
        for &s in rec.trace.symbols() {
            let next = self.child(cur, s);
            let next = if next == NO_NODE {
                let id = self.alloc(cur, s);
                self.nodes[cur as usize].children[s as usize] = id;
                id
            } else {
                next
            };
            self.nodes[next as usize].trace_count += 1;
            cur = next;
        }
        let node = &mut self.nodes[cur as usize];
        if node.label == NO_LABEL {
            node.label = rec.label;
            self.labeled_count += 1;
            if (rec.label as usize) < self.label_counts.len() {
                self.label_counts[rec.label as usize] += 1;
            }
        } else if node.label != rec.label {
            return Err(TreeError::LabelConflict {
                existing: node.label,
                new: rec.label,
            });
        }
        Ok(cur)
    }

    /// Whether the endpoint of `t` exists and carries a label.
    pub fn has_labeled(&self, t: &Trace) -> bool {
        let mut cur: NodeId = 0;
        for &s in t.symbols() {
            cur = self.child(cur, s);
            if cur == NO_NODE {
                return false;
            }
        }
        self.nodes[cur as usize].label != NO_LABEL
    }

    /// Colors `p` red and its non-red children blue (the new fringe).
    pub fn promote(&mut self, p: NodeId) {
        debug_assert_eq!(self.nodes[p as usize].color, Color::Blue);
        self.nodes[p as usize].color = Color::Red;
        self.reds.push(p);
        for s in 0..self.input.size() {
            let c = self.child(p, s);
            if c != NO_NODE && self.nodes[c as usize].color != Color::Red {
                self.nodes[c as usize].color = Color::Blue;
            }
        }
    }

    /// Re-establishes the fringe invariant after new traces were inserted:
    /// every non-red child of a red node is blue.
    pub fn recolor(&mut self) {
        for i in 0..self.reds.len() {
            let r = self.reds[i];
            for s in 0..self.input.size() {
                let c = self.child(r, s);
                if c != NO_NODE && self.nodes[c as usize].color == Color::White {
                    self.nodes[c as usize].color = Color::Blue;
                }
            }
        }
    }

    /// The blue fringe in deterministic order: reds in promotion order,
    /// children in symbol order.
    pub fn fringe(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        for &r in &self.reds {
            for s in 0..self.input.size() {
                let c = self.child(r, s);
                if c != NO_NODE && self.nodes[c as usize].color == Color::Blue {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Clears all colors back to white except the root, which stays red;
    /// labels, nodes, and counts are retained. The fringe becomes the
    /// root's children.
    pub fn reset(&mut self) {
        for n in &mut self.nodes {
            n.color = Color::White;
        }
        self.nodes[0].color = Color::Red;
        self.reds.clear();
        self.reds.push(0);
        self.recolor();
    }

    /// All labeled nodes as (node, access state is implicit) pairs, in a
    /// depth-first order; used by consistency checks.
    pub fn labeled_nodes(&self) -> Vec<NodeId> {
        (0..self.nodes.len() as NodeId)
            .filter(|&n| self.nodes[n as usize].label != NO_LABEL)
            .collect()
    }

    /// Graph-description dump with colors, labels, and trace counts.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "digraph obstree {{").unwrap();
        for (i, n) in self.nodes.iter().enumerate() {
            let color = match n.color {
                Color::Red => "red",
                Color::Blue => "blue",
                Color::White => "gray",
            };
            let label = if n.label == NO_LABEL {
                "?".to_string()
            } else {
                n.label.to_string()
            };
            writeln!(
                out,
                "  n{i} [color={color},label=\"{label} ({})\"];",
                n.trace_count
            )
            .unwrap();
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for (s, &c) in n.children.iter().enumerate() {
                if c != NO_NODE {
                    writeln!(out, "  n{i} -> n{c} [label=\"{s}\"];").unwrap();
                }
            }
        }
        writeln!(out, "}}").unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn lt(symbols: &[u16], label: u16) -> LabeledTrace {
        LabeledTrace::new(Trace::new(symbols.to_vec()), label)
    }

    fn new_tree() -> ObservationTree {
        ObservationTree::new(Alphabet::new(2), Alphabet::new(2))
    }

    #[test]
    fn empty_trace_labels_root() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[], 1)).unwrap();
        assert_eq!(tree.label(tree.root()), Some(1));
    }

    #[test]
    fn repeated_add_is_idempotent_on_labels_and_counts_paths() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[0, 1], 0)).unwrap();
        tree.add_trace(&lt(&[0, 1], 0)).unwrap();
        let n0 = tree.child(tree.root(), 0);
        let n01 = tree.child(n0, 1);
        assert_eq!(tree.label(n01), Some(0));
        assert_eq!(tree.trace_count(tree.root()), 2);
        assert_eq!(tree.trace_count(n0), 2);
        assert_eq!(tree.trace_count(n01), 2);
        assert_eq!(tree.labeled_count(), 1);
    }

    #[test]
    fn conflicting_label_is_error() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[0, 1], 0)).unwrap();
        let err = tree.add_trace(&lt(&[0, 1], 1)).unwrap_err();
        assert_eq!(err, TreeError::LabelConflict { existing: 0, new: 1 });
    }

    #[test]
    fn promote_moves_fringe() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[0, 0], 1)).unwrap();
        tree.recolor();
        let b = tree.child(tree.root(), 0);
        assert_eq!(tree.fringe(), vec![b]);
        tree.promote(b);
        assert_eq!(tree.reds(), &[0, b]);
        assert_eq!(tree.fringe(), vec![tree.child(b, 0)]);
    }

    #[test]
    fn promote_leaf_shrinks_fringe() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[0], 1)).unwrap();
        tree.add_trace(&lt(&[1], 0)).unwrap();
        tree.recolor();
        assert_eq!(tree.fringe().len(), 2);
        let b = tree.child(tree.root(), 0);
        tree.promote(b);
        assert_eq!(tree.fringe().len(), 1);
    }

    #[test]
    fn blue_set_equals_nonred_children_of_reds() {
        let mut tree = new_tree();
        for rec in [lt(&[0, 0], 1), lt(&[0, 1], 0), lt(&[1, 0, 1], 1)] {
            tree.add_trace(&rec).unwrap();
        }
        tree.recolor();
        let b = tree.child(tree.root(), 1);
        tree.promote(b);
        // Recompute from scratch.
        let mut expect = BTreeSet::new();
        for &r in tree.reds() {
            for s in 0..2 {
                let c = tree.child(r, s);
                if c != NO_NODE && !tree.is_red(c) {
                    expect.insert(c);
                }
            }
        }
        let got: BTreeSet<_> = tree.fringe().into_iter().collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn reset_keeps_data_and_is_idempotent() {
        let mut tree = new_tree();
        tree.add_trace(&lt(&[0, 1, 1], 1)).unwrap();
        tree.recolor();
        let b = tree.child(tree.root(), 0);
        tree.promote(b);
        let nodes_before = tree.len();
        tree.reset();
        assert_eq!(tree.len(), nodes_before);
        assert_eq!(tree.reds(), &[0]);
        assert_eq!(tree.fringe(), vec![tree.child(tree.root(), 0)]);
        tree.reset();
        assert_eq!(tree.reds(), &[0]);
        assert_eq!(tree.fringe(), vec![tree.child(tree.root(), 0)]);
    }

    #[test]
    fn access_trace_roundtrip() {
        let mut tree = new_tree();
        let end = tree.add_trace(&lt(&[1, 0, 1, 1], 0)).unwrap();
        assert_eq!(tree.access_trace(end), Trace::new(vec![1, 0, 1, 1]));
        assert_eq!(tree.access_trace(tree.root()), Trace::empty());
    }
}
