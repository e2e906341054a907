//! Exact adversarial solver.
//!
//! Within a length epoch the apple is fixed, so the snake only needs to know
//! which bodies it can reach by non-eating moves. Any winning walk that
//! revisits a body can be shortened to one that does not, so the repetition
//! rule never removes a win and the epoch reduces to a reachability closure:
//! the snake wins from `(body, apple)` iff some body in the closure has its
//! head next to the apple and, after eating, either fills the graph or wins
//! against every placement.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use thiserror::Error;

use crate::game::{check_board, GameError, Role, SnakeState};
use crate::graph::Graph;

/// Largest graph the solver accepts; bodies are packed four bits per vertex.
pub const MAX_SOLVER_VERTICES: usize = 16;

pub const DEFAULT_CEILING: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("solver supports at most {MAX_SOLVER_VERTICES} vertices, graph has {0}")]
    TooLarge(usize),
    #[error("solver ceiling of {limit} memo entries exceeded")]
    CeilingExceeded { limit: usize },
    #[error("{0}")]
    Game(#[from] GameError),
    #[error("it is not the {0:?}'s turn")]
    WrongRole(Role),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WinVerdict {
    pub snake_wins: bool,
    pub best_move: Option<usize>,
    pub node_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Winnability {
    pub winnable: bool,
    /// First `(a0, a1)` start, in lexicographic order, that the placer wins.
    pub witness: Option<(usize, usize)>,
    pub node_count: u64,
}

/// Packed body: vertex `i` of the body in nibble `i + 1`, length in nibble 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Packed(u64);

impl Packed {
    fn from_body(body: &[usize]) -> Packed {
        let verts = body.iter().rev().fold(0u64, |acc, &v| acc << 4 | v as u64);
        Packed(verts << 4 | body.len() as u64)
    }

    fn len(self) -> usize {
        (self.0 & 0xf) as usize
    }

    fn verts(self) -> u64 {
        self.0 >> 4
    }

    fn at(self, i: usize) -> usize {
        (self.verts() >> (4 * i) & 0xf) as usize
    }

    fn head(self) -> usize {
        self.at(0)
    }

    fn tail(self) -> usize {
        self.at(self.len() - 1)
    }

    fn occupied(self) -> u32 {
        (0..self.len()).fold(0, |m, i| m | 1 << self.at(i))
    }

    /// Non-eating move: prepend `t`, drop the tail.
    fn step(self, t: usize) -> Packed {
        let len = self.len();
        let mask = (1u64 << (4 * len)) - 1;
        Packed(((self.verts() << 4 | t as u64) & mask) << 4 | len as u64)
    }

    /// Eating move: prepend `t`. Only valid while the result has at most 15 vertices.
    fn grow(self, t: usize) -> Packed {
        let len = self.len() + 1;
        Packed((self.verts() << 4 | t as u64) << 4 | len as u64)
    }

    fn body(self) -> Vec<usize> {
        (0..self.len()).map(|i| self.at(i)).collect()
    }
}

/// Memoized solver for one graph. Single-threaded, so node counts are
/// reproducible.
pub struct Solver<'g> {
    g: &'g Graph,
    n: usize,
    nbr: Vec<u32>,
    ceiling: usize,
    snake_memo: FxHashMap<(Packed, u8), bool>,
    placer_memo: FxHashMap<Packed, bool>,
    nodes: u64,
}

impl<'g> Solver<'g> {
    pub fn new(g: &'g Graph) -> Result<Self, SolveError> {
        Self::with_ceiling(g, DEFAULT_CEILING)
    }

    pub fn with_ceiling(g: &'g Graph, ceiling: usize) -> Result<Self, SolveError> {
        if g.n() > MAX_SOLVER_VERTICES {
            return Err(SolveError::TooLarge(g.n()));
        }
        check_board(g)?;
        Ok(Solver {
            g,
            n: g.n(),
            nbr: g.vertices().map(|v| g.neighbor_set(v).bits() as u32).collect(),
            ceiling,
            snake_memo: FxHashMap::default(),
            placer_memo: FxHashMap::default(),
            nodes: 0,
        })
    }

    pub fn node_count(&self) -> u64 {
        self.nodes
    }

    pub fn memo_entries(&self) -> usize {
        self.snake_memo.len() + self.placer_memo.len()
    }

    fn charge(&self) -> Result<(), SolveError> {
        if self.memo_entries() > self.ceiling {
            Err(SolveError::CeilingExceeded { limit: self.ceiling })
        } else {
            Ok(())
        }
    }

    /// Non-eating targets from `b`: unoccupied non-apple neighbours, plus the
    /// tail once the body has at least three vertices.
    fn steps(&self, b: Packed, apple: usize) -> u32 {
        let len = b.len();
        let mut free = !b.occupied();
        if len >= 3 {
            free |= 1 << b.tail();
        }
        self.nbr[b.head()] & free & !(1 << apple)
    }

    /// Whether the snake, to move from `b` with the apple on `apple`, wins.
    fn snake_wins(&mut self, b: Packed, apple: usize) -> Result<bool, SolveError> {
        if let Some(&w) = self.snake_memo.get(&(b, apple as u8)) {
            return Ok(w);
        }
        let mut seen = FxHashSet::default();
        seen.insert(b);
        let mut queue = VecDeque::from([b]);
        while let Some(c) = queue.pop_front() {
            self.nodes += 1;
            if self.nbr[c.head()] >> apple & 1 == 1 && self.eat_wins(c, apple)? {
                self.snake_memo.insert((b, apple as u8), true);
                self.snake_memo.insert((c, apple as u8), true);
                self.charge()?;
                return Ok(true);
            }
            let mut m = self.steps(c, apple);
            while m != 0 {
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                let d = c.step(t);
                if seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        // every body in the closure has a sub-closure, so none of them wins
        for c in seen {
            self.snake_memo.insert((c, apple as u8), false);
        }
        self.charge()?;
        Ok(false)
    }

    fn eat_wins(&mut self, c: Packed, apple: usize) -> Result<bool, SolveError> {
        if c.len() + 1 == self.n {
            return Ok(true);
        }
        self.all_placements_win(c.grow(apple))
    }

    /// Whether the snake wins from `b` whatever the placer does.
    fn all_placements_win(&mut self, b: Packed) -> Result<bool, SolveError> {
        if let Some(&w) = self.placer_memo.get(&b) {
            return Ok(w);
        }
        self.nodes += 1;
        let free = !b.occupied() & ((1u32 << self.n) - 1);
        let mut result = true;
        let mut m = free;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            if !self.snake_wins(b, u)? {
                result = false;
                break;
            }
        }
        self.placer_memo.insert(b, result);
        self.charge()?;
        Ok(result)
    }

    fn validate(&self, s: &SnakeState) -> Result<(), SolveError> {
        s.check(self.g)?;
        Ok(())
    }

    /// Game value of `s` and a move for the side to move.
    ///
    /// Snake to move: among moves that keep the win, the one that starts a
    /// shortest route to a winning eat, smallest id on ties; when losing, the
    /// smallest legal move. Placer to move: the smallest placement the snake
    /// loses against, else the smallest unoccupied vertex.
    pub fn solve_state(&mut self, s: &SnakeState) -> Result<WinVerdict, SolveError> {
        self.solve_avoiding(s, &FxHashSet::default())
    }

    /// Like [`Self::solve_state`], but a snake route may not revisit any body in
    /// `history` (the bodies already seen this epoch). The current body is
    /// always allowed.
    pub fn solve_avoiding(
        &mut self,
        s: &SnakeState,
        history: &FxHashSet<Vec<usize>>,
    ) -> Result<WinVerdict, SolveError> {
        self.validate(s)?;
        let start = self.nodes;
        if s.len() == self.n {
            return Ok(WinVerdict {
                snake_wins: true,
                best_move: None,
                node_count: 0,
            });
        }
        let b = Packed::from_body(s.body());
        let (snake_wins, best_move) = match s.apple() {
            None => {
                let wins = self.all_placements_win(b)?;
                let free = s.unoccupied(self.g);
                let mut best = None;
                for u in free {
                    if !self.snake_wins(b, u)? {
                        best = Some(u);
                        break;
                    }
                }
                (wins, best.or(free.first()))
            }
            Some(apple) => self.snake_route(b, apple, history)?,
        };
        Ok(WinVerdict {
            snake_wins,
            best_move,
            node_count: self.nodes - start,
        })
    }

    /// Breadth-first search of the closure (skipping `history`), layer by
    /// layer, for the nearest winning eat.
    fn snake_route(
        &mut self,
        b: Packed,
        apple: usize,
        history: &FxHashSet<Vec<usize>>,
    ) -> Result<(bool, Option<usize>), SolveError> {
        let legal = self.steps(b, apple) | (self.nbr[b.head()] & 1 << apple);
        let first_legal = (legal != 0).then(|| legal.trailing_zeros() as usize);
        if history.is_empty() && !self.snake_wins(b, apple)? {
            return Ok((false, first_legal));
        }
        // (body, first move on a shortest route)
        let mut layer: Vec<(Packed, usize)> = vec![(b, apple)];
        let mut seen = FxHashSet::default();
        seen.insert(b);
        let mut depth = 0;
        while !layer.is_empty() {
            let mut best: Option<usize> = None;
            for &(c, first) in &layer {
                if self.nbr[c.head()] >> apple & 1 == 1 && self.eat_wins(c, apple)? {
                    let mv = if depth == 0 { apple } else { first };
                    best = Some(best.map_or(mv, |m: usize| m.min(mv)));
                }
            }
            if best.is_some() {
                return Ok((true, best));
            }
            let mut next = Vec::new();
            for &(c, first) in &layer {
                let mut m = self.steps(c, apple);
                while m != 0 {
                    let t = m.trailing_zeros() as usize;
                    m &= m - 1;
                    let d = c.step(t);
                    if !history.is_empty() && history.contains(&d.body()) {
                        continue;
                    }
                    if seen.insert(d) {
                        next.push((d, if depth == 0 { t } else { first }));
                    }
                }
            }
            layer = next;
            depth += 1;
        }
        Ok((false, first_legal))
    }

    /// Every body reachable from `s` by non-eating moves, `s` included, sorted.
    pub fn reachable_same_length(&self, s: &SnakeState) -> Result<Vec<Vec<usize>>, SolveError> {
        self.validate(s)?;
        let apple = s.apple().ok_or(SolveError::WrongRole(Role::Placer))?;
        let b = Packed::from_body(s.body());
        let mut seen = FxHashSet::default();
        seen.insert(b);
        let mut stack = vec![b];
        while let Some(c) = stack.pop() {
            let mut m = self.steps(c, apple);
            while m != 0 {
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                let d = c.step(t);
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().map(Packed::body).collect();
        out.sort();
        Ok(out)
    }

    /// Whether the snake wins from every start: the snake spawns on any `a0`
    /// and the first real apple goes on any `a1 != a0`.
    pub fn winnable(&mut self) -> Result<Winnability, SolveError> {
        let start = self.nodes;
        let mut witness = None;
        'outer: for a0 in 0..self.n {
            let b = Packed::from_body(&[a0]);
            for a1 in 0..self.n {
                if a1 != a0 && !self.snake_wins(b, a1)? {
                    witness = Some((a0, a1));
                    break 'outer;
                }
            }
        }
        Ok(Winnability {
            winnable: witness.is_none(),
            witness,
            node_count: self.nodes - start,
        })
    }
}

pub fn solve_state(g: &Graph, s: &SnakeState) -> Result<WinVerdict, SolveError> {
    Solver::new(g)?.solve_state(s)
}

pub fn reachable_same_length(g: &Graph, s: &SnakeState) -> Result<Vec<Vec<usize>>, SolveError> {
    Solver::new(g)?.reachable_same_length(s)
}

pub fn winnable(g: &Graph) -> Result<Winnability, SolveError> {
    Solver::new(g)?.winnable()
}

/// The solver's move for `role`, which must be the side to move.
pub fn optimal_move(g: &Graph, s: &SnakeState, role: Role) -> Result<Option<usize>, SolveError> {
    match s.to_move(g) {
        Some(r) if r == role => Ok(Solver::new(g)?.solve_state(s)?.best_move),
        _ => Err(SolveError::WrongRole(role)),
    }
}
