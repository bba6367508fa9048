//! Lempel-Ziv match lengths via a suffix automaton.
//!
//! For position `i` the match length is `1 + L_i`, where `L_i` is the length
//! of the longest substring starting at `i` that occurs entirely inside
//! `states[..i]`. A match that runs into the end of the series still counts
//! its full length.
//!
//! The automaton is built over the whole series and records, for every
//! state, the end (exclusive) of the first occurrence of its strings. A
//! string starting at `i` occurs inside `states[..i]` iff that first end is
//! `<= i`, and the first end only grows as the string is extended, so the
//! longest admissible match can be found greedily. Since `L_{i+1} >= L_i - 1`
//! the match is carried over between positions by dropping its first symbol
//! (following a suffix link when the length falls out of the current state),
//! which makes the whole pass linear in `n` up to transition lookups.

use crate::series::StateId;

const NONE: u32 = u32::MAX;

struct Edge {
    symbol: u32,
    target: u32,
    next: u32,
}

struct Node {
    len: u32,
    link: u32,
    first_end: u32,
    head: u32,
}

struct SuffixAutomaton {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    // Transitions out of the root, indexed by symbol.
    root: Vec<u32>,
    last: u32,
}

impl SuffixAutomaton {
    fn build(text: &[StateId], alphabet_size: usize) -> Self {
        let n = text.len();
        let mut sam = SuffixAutomaton {
            nodes: Vec::with_capacity(2 * n + 1),
            edges: Vec::with_capacity(3 * n),
            root: vec![NONE; alphabet_size],
            last: 0,
        };
        sam.nodes.push(Node {
            len: 0,
            link: NONE,
            first_end: 0,
            head: NONE,
        });
        for (pos, &c) in text.iter().enumerate() {
            sam.extend(c.0, pos as u32 + 1);
        }
        sam
    }

    #[inline]
    fn get(&self, node: u32, symbol: u32) -> u32 {
        if node == 0 {
            return self.root[symbol as usize];
        }
        let mut e = self.nodes[node as usize].head;
        while e != NONE {
            let edge = &self.edges[e as usize];
            if edge.symbol == symbol {
                return edge.target;
            }
            e = edge.next;
        }
        NONE
    }

    fn set(&mut self, node: u32, symbol: u32, target: u32) {
        if node == 0 {
            self.root[symbol as usize] = target;
            return;
        }
        let mut e = self.nodes[node as usize].head;
        while e != NONE {
            let edge = &mut self.edges[e as usize];
            if edge.symbol == symbol {
                edge.target = target;
                return;
            }
            e = edge.next;
        }
        let id = self.edges.len() as u32;
        self.edges.push(Edge {
            symbol,
            target,
            next: self.nodes[node as usize].head,
        });
        self.nodes[node as usize].head = id;
    }

    fn extend(&mut self, c: u32, end: u32) {
        let cur = self.nodes.len() as u32;
        let cur_len = self.nodes[self.last as usize].len + 1;
        self.nodes.push(Node {
            len: cur_len,
            link: NONE,
            first_end: end,
            head: NONE,
        });

        let mut p = self.last;
        while p != NONE && self.get(p, c) == NONE {
            self.set(p, c, cur);
            p = self.nodes[p as usize].link;
        }
        if p == NONE {
            self.nodes[cur as usize].link = 0;
        } else {
            let q = self.get(p, c);
            if self.nodes[p as usize].len + 1 == self.nodes[q as usize].len {
                self.nodes[cur as usize].link = q;
            } else {
                let clone = self.nodes.len() as u32;
                let q_node = &self.nodes[q as usize];
                let (q_link, q_first_end, mut e) = (q_node.link, q_node.first_end, q_node.head);
                self.nodes.push(Node {
                    len: self.nodes[p as usize].len + 1,
                    link: q_link,
                    first_end: q_first_end,
                    head: NONE,
                });
                while e != NONE {
                    let (symbol, target, next) = {
                        let edge = &self.edges[e as usize];
                        (edge.symbol, edge.target, edge.next)
                    };
                    let id = self.edges.len() as u32;
                    self.edges.push(Edge {
                        symbol,
                        target,
                        next: self.nodes[clone as usize].head,
                    });
                    self.nodes[clone as usize].head = id;
                    e = next;
                }
                while p != NONE && self.get(p, c) == q {
                    self.set(p, c, clone);
                    p = self.nodes[p as usize].link;
                }
                self.nodes[q as usize].link = clone;
                self.nodes[cur as usize].link = clone;
            }
        }
        self.last = cur;
    }
}

/// Match lengths `Λ_i` (1 + longest previous match) for every position.
pub fn match_lengths(states: &[StateId], alphabet_size: usize) -> Vec<u64> {
    let n = states.len();
    if n == 0 {
        return Vec::new();
    }
    let sam = SuffixAutomaton::build(states, alphabet_size);
    let mut out = Vec::with_capacity(n);
    let mut node = 0u32;
    let mut len = 0usize;
    for i in 0..n {
        // `states[i..i + len]` is represented by `node` and first ends <= i.
        while i + len < n {
            let next = sam.get(node, states[i + len].0);
            if next == NONE || sam.nodes[next as usize].first_end as usize > i {
                break;
            }
            node = next;
            len += 1;
        }
        out.push(len as u64 + 1);
        if len > 0 {
            len -= 1;
            let link = sam.nodes[node as usize].link;
            if len <= sam.nodes[link as usize].len as usize {
                node = link;
            }
        }
    }
    out
}
