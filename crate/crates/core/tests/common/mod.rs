//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's norm, shear or cover code; the free-group and lattice
//! arithmetic is reimplemented from scratch.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use coarsedim::coarse::{EntourageSample, GapSet};
use coarsedim::{GroupElement, GroupModel};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Free reduction of a concatenation, letters ±1, ±2, ….
pub fn free_mul(x: &[i8], y: &[i8]) -> Vec<i8> {
    let mut out = x.to_vec();
    for &l in y {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn free_inv(x: &[i8]) -> Vec<i8> {
    x.iter().rev().map(|l| -l).collect()
}

/// Cayley-graph neighbours of a node for the standard generators.
#[derive(Clone, Copy, Debug)]
pub enum Lattice {
    /// ℤⁿ with unit vectors.
    Abelian(usize),
    /// F_k with letters.
    Free(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    V(Vec<i64>),
    W(Vec<i8>),
}

impl Lattice {
    pub fn identity(self) -> Node {
        match self {
            Lattice::Abelian(n) => Node::V(vec![0; n]),
            Lattice::Free(_) => Node::W(vec![]),
        }
    }

    pub fn neighbours(self, x: &Node) -> Vec<Node> {
        match (self, x) {
            (Lattice::Abelian(n), Node::V(v)) => {
                let mut out = Vec::new();
                for i in 0..n {
                    for d in [-1, 1] {
                        let mut w = v.clone();
                        w[i] += d;
                        out.push(Node::V(w));
                    }
                }
                out
            }
            (Lattice::Free(k), Node::W(w)) => (1..=k as i8)
                .flat_map(|l| [l, -l])
                .map(|l| Node::W(free_mul(w, &[l])))
                .collect(),
            _ => panic!("node does not match lattice"),
        }
    }

    /// Graph distances from `from`, up to `depth`.
    pub fn bfs(self, from: &Node, depth: usize) -> HashMap<Node, usize> {
        let mut dist = HashMap::from([(from.clone(), 0)]);
        let mut q = VecDeque::from([from.clone()]);
        while let Some(x) = q.pop_front() {
            let d = dist[&x];
            if d == depth {
                continue;
            }
            for y in self.neighbours(&x) {
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    q.push_back(y);
                }
            }
        }
        dist
    }

    pub fn to_node(self, g: &GroupElement) -> Node {
        match g {
            GroupElement::Vector(v) => Node::V(v.clone()),
            GroupElement::Word(w) => Node::W(w.clone()),
            other => panic!("no lattice node for {other}"),
        }
    }

    pub fn to_element(self, x: &Node) -> GroupElement {
        match x {
            Node::V(v) => GroupElement::vector(v.clone()),
            Node::W(w) => GroupElement::word(w),
        }
    }

    pub fn mul(self, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::V(x), Node::V(y)) => Node::V(x.iter().zip(y).map(|(p, q)| p + q).collect()),
            (Node::W(x), Node::W(y)) => Node::W(free_mul(x, y)),
            _ => panic!("mixed nodes"),
        }
    }

    pub fn inv(self, a: &Node) -> Node {
        match a {
            Node::V(x) => Node::V(x.iter().map(|p| -p).collect()),
            Node::W(x) => Node::W(free_inv(x)),
        }
    }

    /// Word length via the graph distance from the identity.
    pub fn length(self, g: &Node) -> usize {
        match g {
            Node::V(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
            Node::W(w) => w.len(),
        }
    }
}

/// Is every pair (x, y) of E of the form (g·a, g·b) with a, b ∈ A?
/// Exhaustive over g in a ball large enough to contain every candidate.
pub fn realized_by_search(lat: Lattice, e: &[(Node, Node)], a: &[Node]) -> bool {
    if e.is_empty() {
        return true;
    }
    if a.is_empty() {
        return false;
    }
    let reach = e.iter().map(|(x, _)| lat.length(x)).max().unwrap() + a.iter().map(|n| lat.length(n)).max().unwrap();
    let ball: Vec<Node> = lat.bfs(&lat.identity(), reach).into_keys().collect();
    let a_set: BTreeSet<&Node> = a.iter().collect();
    e.iter().all(|(x, y)| {
        ball.iter().any(|g| {
            let gi = lat.inv(g);
            a_set.contains(&lat.mul(&gi, x)) && a_set.contains(&lat.mul(&gi, y))
        })
    })
}

/// A random element of the model's ball of radius `r`.
pub fn random_ball_element(rng: &mut ChaCha8Rng, ball: &[GroupElement]) -> GroupElement {
    ball.choose(rng).expect("nonempty ball").clone()
}

pub fn random_subset(rng: &mut ChaCha8Rng, pool: &[GroupElement], max: usize) -> GapSet {
    let n = rng.random_range(1..=max);
    (0..n).map(|_| random_ball_element(rng, pool)).collect()
}

/// Random (E, A) with half of the pairs realized through A and half drawn
/// freely from the pool.
pub fn random_entourage_case(
    model: &GroupModel,
    rng: &mut ChaCha8Rng,
    pool: &[GroupElement],
) -> (EntourageSample, GapSet) {
    let a = random_subset(rng, pool, 4);
    let items: Vec<GroupElement> = a.iter().cloned().collect();
    let mut pairs = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        if rng.random_bool(0.5) {
            let g = random_ball_element(rng, pool);
            let x = model.multiply(&g, items.choose(rng).unwrap()).unwrap();
            let y = model.multiply(&g, items.choose(rng).unwrap()).unwrap();
            pairs.push((x.to_string(), y.to_string()));
        } else {
            pairs.push((random_ball_element(rng, pool).to_string(), random_ball_element(rng, pool).to_string()));
        }
    }
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    (EntourageSample::parse(model, &refs).unwrap(), a)
}
