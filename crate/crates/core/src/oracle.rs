//! Exhaustive reference solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::MccInstance;
use crate::instance::{PathWitness, VwSspInstance};

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub answer: bool,
    pub min_cost: Option<u64>,
    pub best_load: Option<u64>,
    pub witness: Option<PathWitness>,
}

struct Search<'a> {
    inst: &'a VwSspInstance,
    on_path: Vec<bool>,
    // Number of path vertices adjacent to each vertex.
    touch: Vec<u32>,
    path: Vec<usize>,
    cost: u64,
    load: u64,
    best: Option<(u64, u64, Vec<usize>)>,
}

impl Search<'_> {
    fn push(&mut self, v: usize) {
        let i = self.inst;
        if self.touch[v] > 0 {
            self.load -= i.lambda[v];
        }
        self.load += i.eta[v];
        self.cost += i.kappa[v];
        self.on_path[v] = true;
        self.path.push(v);
        for &w in i.graph.neighbors(v) {
            if !self.on_path[w] && self.touch[w] == 0 {
                self.load += i.lambda[w];
            }
            self.touch[w] += 1;
        }
    }

    fn pop(&mut self) {
        let i = self.inst;
        let v = self.path.pop().expect("pop on empty path");
        for &w in i.graph.neighbors(v) {
            self.touch[w] -= 1;
            if !self.on_path[w] && self.touch[w] == 0 {
                self.load -= i.lambda[w];
            }
        }
        self.on_path[v] = false;
        self.cost -= i.kappa[v];
        self.load -= i.eta[v];
        if self.touch[v] > 0 {
            self.load += i.lambda[v];
        }
    }

    fn run(&mut self, v: usize) {
        self.push(v);
        if v == self.inst.t {
            // Load is not monotone along prefixes, so it is only judged here.
            if self.load <= self.inst.l {
                let better = match &self.best {
                    None => true,
                    Some((c, l, _)) => (self.cost, self.load) < (*c, *l),
                };
                if better {
                    self.best = Some((self.cost, self.load, self.path.clone()));
                }
            }
        } else {
            let nb = self.inst.graph.neighbors(v);
            for &w in nb {
                if !self.on_path[w] && self.cost + self.inst.kappa[w] <= self.inst.k {
                    self.run(w);
                }
            }
        }
        self.pop();
    }
}

/// Minimum-cost feasible path, and among those the minimum load; the reported
/// witness is the lexicographically smallest optimal vertex sequence.
pub fn brute_force_solve(i: &VwSspInstance, cap: usize) -> Result<OracleAnswer> {
    i.validate()?;
    if i.n() > cap {
        return Err(Error::CapExceeded { size: i.n(), cap });
    }
    let n = i.n();
    let mut search = Search {
        inst: i,
        on_path: vec![false; n],
        touch: vec![0; n],
        path: Vec::new(),
        cost: 0,
        load: 0,
        best: None,
    };
    if i.kappa[i.s] <= i.k {
        search.run(i.s);
    }
    Ok(match search.best {
        Some((c, l, p)) => OracleAnswer {
            answer: true,
            min_cost: Some(c),
            best_load: Some(l),
            witness: Some(PathWitness(p)),
        },
        None => OracleAnswer {
            answer: false,
            min_cost: None,
            best_load: None,
            witness: None,
        },
    })
}

/// True iff some choice of one vertex per class is pairwise adjacent.
pub fn brute_force_mcc(g: &MccInstance, class_cap: usize) -> Result<bool> {
    if let Some(c) = g.classes.iter().find(|c| c.len() > class_cap) {
        return Err(Error::CapExceeded {
            size: c.len(),
            cap: class_cap,
        });
    }
    fn extend(g: &MccInstance, chosen: &mut Vec<usize>) -> bool {
        let idx = chosen.len();
        if idx == g.classes.len() {
            return true;
        }
        for &v in &g.classes[idx] {
            if chosen.iter().all(|&u| g.graph.has_edge(u, v)) {
                chosen.push(v);
                if extend(g, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    Ok(extend(g, &mut Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::instance::{lift, SspInstance};

    fn unit(n: usize, edges: &[(usize, usize)], s: usize, t: usize, k: u64, l: u64) -> VwSspInstance {
        lift(&SspInstance::new(Graph::from_edges(n, edges.iter().copied()).unwrap(), s, t, k, l).unwrap())
    }

    #[test]
    fn path_instance() {
        let r = brute_force_solve(&unit(3, &[(0, 1), (1, 2)], 0, 2, 3, 0), 20).unwrap();
        assert!(r.answer);
        assert_eq!(r.min_cost, Some(3));
        assert_eq!(r.witness, Some(PathWitness(vec![0, 1, 2])));
    }

    #[test]
    fn disconnected_is_no() {
        let r = brute_force_solve(&unit(3, &[], 0, 1, 3, 3), 20).unwrap();
        assert!(!r.answer);
    }

    #[test]
    fn triangle() {
        // s=0, t=1, a=2
        let tri = [(0, 1), (0, 2), (1, 2)];
        let r = brute_force_solve(&unit(3, &tri, 0, 1, 3, 0), 20).unwrap();
        assert_eq!((r.answer, r.min_cost, r.best_load), (true, Some(3), Some(0)));
        assert!(!brute_force_solve(&unit(3, &tri, 0, 1, 2, 0), 20).unwrap().answer);
        let r = brute_force_solve(&unit(3, &tri, 0, 1, 2, 1), 20).unwrap();
        assert_eq!((r.min_cost, r.best_load), (Some(2), Some(1)));
    }

    #[test]
    fn prefix_load_may_shrink() {
        // The prefix [s] already has load 2 > l; the full path absorbs both.
        let i = unit(4, &[(0, 1), (0, 2), (1, 2), (2, 3)], 0, 3, 4, 0);
        let r = brute_force_solve(&i, 20).unwrap();
        assert!(r.answer);
        assert_eq!(r.witness, Some(PathWitness(vec![0, 1, 2, 3])));
    }

    #[test]
    fn cap_is_enforced() {
        let i = unit(3, &[(0, 1)], 0, 1, 2, 0);
        assert!(matches!(brute_force_solve(&i, 2), Err(Error::CapExceeded { .. })));
    }
}
