use std::collections::VecDeque;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::game::{
    check_board, classify_move, head_graph_is_complete, legal_moves, place_apple, MoveKind, SnakeState,
};
use crate::graph::{hamiltonian_cycle, Graph, Limits};
use crate::solver::MAX_SOLVER_VERTICES;

use super::{PlacerPolicy, PolicyError, SnakePolicy};

pub const DEFAULT_STATE_CEILING: u64 = 20_000_000;

/// Outcome of an exhaustive check.
///
/// `leaves` counts distinct terminal positions: winning eats for a snake
/// policy, epochs in which the snake can never eat for a placer policy.
/// `depth` is the greatest snake length reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub leaves: u64,
    pub depth: usize,
    pub states: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

enum Stop {
    Invalid(String),
    Fatal(PolicyError),
}

impl From<PolicyError> for Stop {
    fn from(e: PolicyError) -> Self {
        match e {
            PolicyError::CeilingExceeded { .. } => Stop::Fatal(e),
            other => Stop::Invalid(other.to_string()),
        }
    }
}

fn guard(g: &Graph) -> Result<(), PolicyError> {
    check_board(g)?;
    if g.n() > MAX_SOLVER_VERTICES {
        return Err(PolicyError::Inapplicable(format!(
            "validation supports at most {MAX_SOLVER_VERTICES} vertices, got {}",
            g.n()
        )));
    }
    Ok(())
}

struct Counters {
    leaves: u64,
    depth: usize,
    states: u64,
    ceiling: u64,
}

impl Counters {
    fn new(ceiling: u64) -> Self {
        Counters {
            leaves: 0,
            depth: 0,
            states: 0,
            ceiling,
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.states += 1;
        if self.states > self.ceiling {
            return Err(Stop::Fatal(PolicyError::CeilingExceeded { limit: self.ceiling }));
        }
        Ok(())
    }

    fn finish(self, result: Result<(), Stop>) -> Result<ValidationReport, PolicyError> {
        let failure = match result {
            Ok(()) => None,
            Err(Stop::Invalid(m)) => Some(m),
            Err(Stop::Fatal(e)) => return Err(e),
        };
        Ok(ValidationReport {
            valid: failure.is_none(),
            leaves: self.leaves,
            depth: self.depth,
            states: self.states,
            failure,
        })
    }
}

fn grown(body: &[usize], t: usize) -> Vec<usize> {
    let mut b = Vec::with_capacity(body.len() + 1);
    b.push(t);
    b.extend_from_slice(body);
    b
}

fn stepped(body: &[usize], t: usize) -> Vec<usize> {
    let mut b = Vec::with_capacity(body.len());
    b.push(t);
    b.extend_from_slice(&body[..body.len() - 1]);
    b
}

fn state(body: Vec<usize>, apple: Option<usize>, g: &Graph) -> SnakeState {
    SnakeState::new(g, body, apple).expect("harness only builds valid states")
}

struct SnakeCheck<'a> {
    g: &'a Graph,
    policy: &'a dyn SnakePolicy,
    done: FxHashSet<Vec<usize>>,
    c: Counters,
}

impl SnakeCheck<'_> {
    fn placer_node(&mut self, body: Vec<usize>) -> Result<(), Stop> {
        self.c.depth = self.c.depth.max(body.len());
        if self.done.contains(&body) {
            return Ok(());
        }
        let free = self.g.vertex_set().difference(body.iter().copied().collect());
        for a in free.iter() {
            self.epoch(body.clone(), a)?;
        }
        self.done.insert(body);
        Ok(())
    }

    /// Plays the policy until it eats; the epoch's apple never moves.
    fn epoch(&mut self, body: Vec<usize>, apple: usize) -> Result<(), Stop> {
        let g = self.g;
        let mut s = state(body, Some(apple), g);
        let mut seen = FxHashSet::default();
        seen.insert(s.body().to_vec());
        loop {
            self.c.tick()?;
            let t = self.policy.choose(g, &s)?;
            let kind = classify_move(g, &s, t).map_err(|e| {
                Stop::Invalid(format!(
                    "{} chose {t} with body {:?} and apple {apple}: {e}",
                    self.policy.name(),
                    s.body()
                ))
            })?;
            if kind == MoveKind::Alpha {
                let b = grown(s.body(), t);
                if b.len() == g.n() {
                    self.c.depth = g.n();
                    self.c.leaves += 1;
                    return Ok(());
                }
                return self.placer_node(b);
            }
            let b = stepped(s.body(), t);
            if !seen.insert(b.clone()) {
                return Err(Stop::Invalid(format!(
                    "{} repeats body {b:?} with apple {apple}",
                    self.policy.name()
                )));
            }
            s = state(b, Some(apple), g);
        }
    }
}

/// Plays `policy` against every placer line, including every spawn vertex.
/// Valid iff every line ends with the snake filling the graph.
pub fn validate_snake_policy(g: &Graph, policy: &dyn SnakePolicy) -> Result<ValidationReport, PolicyError> {
    validate_snake_policy_with(g, policy, DEFAULT_STATE_CEILING)
}

pub fn validate_snake_policy_with(
    g: &Graph,
    policy: &dyn SnakePolicy,
    ceiling: u64,
) -> Result<ValidationReport, PolicyError> {
    guard(g)?;
    let mut check = SnakeCheck {
        g,
        policy,
        done: FxHashSet::default(),
        c: Counters::new(ceiling),
    };
    let result = g.vertices().try_for_each(|a0| check.placer_node(vec![a0]));
    check.c.finish(result)
}

struct PlacerCheck<'a> {
    g: &'a Graph,
    policy: &'a dyn PlacerPolicy,
    hamiltonian: bool,
    done: FxHashSet<Vec<usize>>,
    c: Counters,
}

impl PlacerCheck<'_> {
    fn placer_node(&mut self, body: Vec<usize>) -> Result<(), Stop> {
        self.c.depth = self.c.depth.max(body.len());
        if self.done.contains(&body) {
            return Ok(());
        }
        let g = self.g;
        let s = state(body.clone(), None, g);
        let a = self.policy.choose(g, &s)?;
        place_apple(g, &s, a).map_err(|e| {
            Stop::Invalid(format!(
                "{} placed {a} with body {body:?}: {e}",
                self.policy.name()
            ))
        })?;
        self.epoch(body.clone(), a)?;
        self.done.insert(body);
        Ok(())
    }

    fn assertion(&self, what: &str, body: &[usize], apple: usize) -> Stop {
        Stop::Invalid(PolicyError::Assertion(format!("{what} (body {body:?}, apple {apple})")).to_string())
    }

    /// Every body the snake can reach without eating, and every eat from one.
    fn epoch(&mut self, body: Vec<usize>, apple: usize) -> Result<(), Stop> {
        let g = self.g;
        let mut seen = FxHashSet::default();
        let mut queue = VecDeque::from([body.clone()]);
        seen.insert(body);
        let mut ate = false;
        while let Some(b) = queue.pop_front() {
            self.c.tick()?;
            let s = state(b.clone(), Some(apple), g);
            for (t, kind) in legal_moves(g, &s) {
                match kind {
                    MoveKind::Alpha => {
                        ate = true;
                        let next = grown(&b, t);
                        if next.len() == g.n() {
                            return Err(Stop::Invalid(format!(
                                "snake fills the graph by eating {apple} from body {b:?}"
                            )));
                        }
                        self.placer_node(next)?;
                    }
                    MoveKind::Beta | MoveKind::Gamma => {
                        let next = stepped(&b, t);
                        if kind == MoveKind::Beta {
                            self.check_beta(&b, &next, apple)?;
                        }
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        if !ate {
            self.c.leaves += 1;
        }
        Ok(())
    }

    /// Move-type facts after a step onto a free non-apple vertex.
    fn check_beta(&self, before: &[usize], after: &[usize], apple: usize) -> Result<(), Stop> {
        let g = self.g;
        let old_tail = before[before.len() - 1];
        if after.contains(&old_tail) || old_tail == apple {
            return Err(self.assertion("former tail is occupied or holds the apple", after, apple));
        }
        if self.hamiltonian {
            return Ok(());
        }
        let s = state(after.to_vec(), Some(apple), g);
        if head_graph_is_complete(g, &s) {
            return Err(self.assertion(
                "head graph complete after a step on a non-Hamiltonian graph",
                after,
                apple,
            ));
        }
        if g.has_edge(after[0], apple) {
            let eaten = state(grown(after, apple), None, g);
            if head_graph_is_complete(g, &eaten) {
                return Err(self.assertion(
                    "head graph complete after a step then an eat on a non-Hamiltonian graph",
                    eaten.body(),
                    apple,
                ));
            }
        }
        Ok(())
    }
}

/// Plays `policy` against every snake line, starting from the policy's
/// spawn vertex. Valid iff the snake never fills the graph.
pub fn validate_placer_policy(g: &Graph, policy: &dyn PlacerPolicy) -> Result<ValidationReport, PolicyError> {
    validate_placer_policy_with(g, policy, DEFAULT_STATE_CEILING)
}

pub fn validate_placer_policy_with(
    g: &Graph,
    policy: &dyn PlacerPolicy,
    ceiling: u64,
) -> Result<ValidationReport, PolicyError> {
    guard(g)?;
    let hamiltonian = hamiltonian_cycle(g, Limits::default())?.is_some();
    let mut check = PlacerCheck {
        g,
        policy,
        hamiltonian,
        done: FxHashSet::default(),
        c: Counters::new(ceiling),
    };
    let a0 = policy.spawn(g);
    let result = if a0 < g.n() {
        check.placer_node(vec![a0])
    } else {
        Err(Stop::Invalid(format!(
            "{} spawns on missing vertex {a0}",
            policy.name()
        )))
    };
    check.c.finish(result)
}
