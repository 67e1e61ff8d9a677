//! Newick input and canonical output.
//!
//! Leaf names must be the integers `1..=n`. Branch lengths are integers,
//! fractions `p/q` or decimals. Rooting is erased: degree-2 vertices are
//! suppressed by merging their two edges.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Edge, PhyloTree};
use crate::error::{Error, Result};
use crate::rational::{int, parse_decimal, parse_rational, Rational};

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    /// Parsed vertices: `Some(label)` for leaves.
    labels: Vec<Option<usize>>,
    links: Vec<(usize, usize, Rational)>,
}

impl Parser<'_> {
    fn fail<T>(&self, message: impl ToString) -> Result<T> {
        Err(Error::Newick { position: self.pos, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn token(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && !b"(),:;".contains(&self.text[self.pos])
            && !self.text[self.pos].is_ascii_whitespace()
        {
            self.pos += 1;
        }
        core::str::from_utf8(&self.text[start..self.pos]).expect("input is a str")
    }

    fn length(&mut self) -> Result<Rational> {
        let start = self.pos;
        let text = self.token().to_string();
        let value = if text.contains('/') { parse_rational(&text) } else { parse_decimal(&text) };
        match value {
            Ok(v) if v > int(0) => Ok(v),
            Ok(v) => {
                self.pos = start;
                self.fail(format!("branch length {v} is not positive"))
            }
            Err(_) => {
                self.pos = start;
                self.fail(format!("invalid branch length {text:?}"))
            }
        }
    }

    fn subtree(&mut self) -> Result<usize> {
        let id = self.labels.len();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.labels.push(None);
            loop {
                let child = self.subtree()?;
                if self.peek() != Some(b':') {
                    return self.fail("expected ':' and a branch length");
                }
                self.pos += 1;
                let weight = self.length()?;
                self.links.push((id, child, weight));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.fail("expected ',' or ')'"),
                }
            }
            // internal labels such as support values are ignored
            self.token();
            Ok(id)
        } else {
            let start = self.pos;
            let name = self.token().to_string();
            match name.parse::<usize>() {
                Ok(label) if label >= 1 => {
                    self.labels.push(Some(label));
                    Ok(id)
                }
                _ => {
                    self.pos = start;
                    self.fail(format!("leaf name {name:?} is not a positive integer"))
                }
            }
        }
    }
}

/// Parses a Newick string into an unrooted tree.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser { text: text.as_bytes(), pos: 0, labels: Vec::new(), links: Vec::new() };
    p.subtree()?;
    if p.peek() == Some(b':') {
        p.pos += 1;
        p.length()?;
    }
    if p.peek() != Some(b';') {
        return p.fail("expected ';'");
    }
    p.pos += 1;
    if p.peek().is_some() {
        return p.fail("trailing input after ';'");
    }

    let n = p.labels.iter().flatten().count();
    let mut vertex = alloc::vec![usize::MAX; p.labels.len()];
    let mut next_internal = n;
    for (i, label) in p.labels.iter().enumerate() {
        match *label {
            Some(l) if l > n => return Err(Error::InvalidTree(format!("leaf label {l} exceeds the leaf count {n}"))),
            Some(l) if vertex.contains(&(l - 1)) => {
                return Err(Error::InvalidTree(format!("duplicate leaf label {l}")))
            }
            Some(l) => vertex[i] = l - 1,
            None => {
                vertex[i] = next_internal;
                next_internal += 1;
            }
        }
    }
    let mut adjacency: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new(); next_internal];
    for (u, v, w) in p.links {
        adjacency[vertex[u]].push((vertex[v], w.clone()));
        adjacency[vertex[v]].push((vertex[u], w));
    }
    // suppress internal vertices of degree 2
    let mut alive = alloc::vec![true; next_internal];
    for x in n..next_internal {
        match adjacency[x].len() {
            2 => {
                let (a, wa) = adjacency[x][0].clone();
                let (b, wb) = adjacency[x][1].clone();
                let merged = wa + wb;
                for (end, other) in [(a, b), (b, a)] {
                    let slot = adjacency[end].iter_mut().find(|(y, _)| *y == x).expect("symmetric adjacency");
                    *slot = (other, merged.clone());
                }
                adjacency[x].clear();
                alive[x] = false;
            }
            d if d < 2 => return Err(Error::InvalidTree(format!("internal vertex with degree {d}"))),
            _ => {}
        }
    }
    let mut renumber = alloc::vec![usize::MAX; next_internal];
    let mut count = 0;
    for (x, live) in alive.iter().enumerate() {
        if *live {
            renumber[x] = count;
            count += 1;
        }
    }
    let mut edges = Vec::new();
    for (x, nbrs) in adjacency.iter().enumerate() {
        for (y, w) in nbrs {
            if x < *y {
                edges.push(Edge { u: renumber[x], v: renumber[*y], weight: w.clone() });
            }
        }
    }
    PhyloTree::new(n, edges)
}

/// Canonical Newick: rooted at the neighbour of leaf 1, children ordered by
/// their smallest leaf label, exact rational branch lengths.
pub fn emit_newick(tree: &PhyloTree) -> String {
    let n = tree.n();
    if n == 2 {
        let half = &tree.edges()[0].weight / int(2);
        return format!("(1:{half},2:{half});");
    }
    let (root, _) = tree.neighbours(0).next().expect("leaf 1 has a neighbour");
    let (body, _) = render(tree, root, usize::MAX);
    format!("{body};")
}

fn render(tree: &PhyloTree, v: usize, from: usize) -> (String, usize) {
    if v < tree.n() {
        return ((v + 1).to_string(), v + 1);
    }
    let mut parts: Vec<(usize, String)> = tree
        .neighbours(v)
        .filter(|(w, _)| *w != from)
        .map(|(w, weight)| {
            let (text, min) = render(tree, w, v);
            (min, format!("{text}:{weight}"))
        })
        .collect();
    parts.sort();
    let min = parts[0].0;
    let joined: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
    (format!("({})", joined.join(",")), min)
}
