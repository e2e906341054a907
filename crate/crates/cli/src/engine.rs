//! Move selection for the side the engine plays.
//!
//! The ladder is: exact solver while it stays under its ceiling, then the
//! proof policy that matches the graph's classification, then a greedy
//! heuristic. Every choice records which rung produced it.

use serde::Serialize;
use snakegraph::characterize::{classify, Certificate, Classification, Reason, Verdict};
use snakegraph::game::{classify_move, place_apple, Game, MoveKind, Role, SnakeState};
use snakegraph::graph::Graph;
use snakegraph::solver::Solver;
use snakegraph::strategies::{
    connectivity_placer_policy, cut_vertex_snake_policy, girth_placer_policy, hamiltonian_snake_policy,
    odd_bipartite_placer_policy, theta_snake_policy, FarthestPlacer, GreedySnake, PlacerPolicy, SnakePolicy,
};

pub const DEFAULT_ENGINE_CEILING: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Solver,
    ProofPolicy,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Choice {
    pub role: Role,
    pub vertex: usize,
    pub source: Source,
    pub policy: &'static str,
    /// True only for solver choices.
    pub optimal: bool,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown policy {0:?}")]
    UnknownPolicy(String),
    #[error("policy {name:?} plays the {role:?}, not the {wanted:?}")]
    WrongRole { name: String, role: Role, wanted: Role },
    #[error("policy {name:?} does not apply to this graph: {detail}")]
    Inapplicable { name: String, detail: String },
    #[error("no move available: the game is over")]
    GameOver,
}

pub const SNAKE_POLICIES: [&str; 4] = ["theta", "hamiltonian", "cut-vertex", "greedy"];
pub const PLACER_POLICIES: [&str; 4] = ["farthest", "odd-bipartite", "connectivity", "girth"];

/// Role played by a named policy.
pub fn policy_role(name: &str) -> Option<Role> {
    if SNAKE_POLICIES.contains(&name) {
        Some(Role::Snake)
    } else if PLACER_POLICIES.contains(&name) {
        Some(Role::Placer)
    } else {
        None
    }
}

fn inapplicable(name: &str, detail: impl ToString) -> EngineError {
    EngineError::Inapplicable {
        name: name.to_string(),
        detail: detail.to_string(),
    }
}

/// Builds a named snake policy. `cut-vertex` tries each cut vertex in turn.
pub fn named_snake_policy(g: &Graph, name: &str) -> Result<Box<dyn SnakePolicy>, EngineError> {
    match name {
        "theta" => {
            let cert = snakegraph::graph::find_theta_n322(g, Default::default())
                .map_err(|e| inapplicable(name, e))?
                .ok_or_else(|| inapplicable(name, "no spanning theta subgraph"))?;
            Ok(Box::new(
                theta_snake_policy(g, cert).map_err(|e| inapplicable(name, e))?,
            ))
        }
        "hamiltonian" => Ok(Box::new(
            hamiltonian_snake_policy(g, None).map_err(|e| inapplicable(name, e))?,
        )),
        "cut-vertex" => {
            let mut last = String::from("graph has no cut vertex");
            for v in snakegraph::graph::cut_vertices(g) {
                match cut_vertex_snake_policy(g, v) {
                    Ok(p) => return Ok(Box::new(p)),
                    Err(e) => last = e.to_string(),
                }
            }
            Err(inapplicable(name, last))
        }
        "greedy" => Ok(Box::new(GreedySnake)),
        _ => Err(wrong_or_unknown(name, Role::Snake)),
    }
}

pub fn named_placer_policy(g: &Graph, name: &str) -> Result<Box<dyn PlacerPolicy>, EngineError> {
    match name {
        "farthest" => Ok(Box::new(FarthestPlacer)),
        "odd-bipartite" => Ok(Box::new(
            odd_bipartite_placer_policy(g).map_err(|e| inapplicable(name, e))?,
        )),
        "connectivity" => Ok(Box::new(
            connectivity_placer_policy(g).map_err(|e| inapplicable(name, e))?,
        )),
        "girth" => Ok(Box::new(
            girth_placer_policy(g).map_err(|e| inapplicable(name, e))?,
        )),
        _ => Err(wrong_or_unknown(name, Role::Placer)),
    }
}

fn wrong_or_unknown(name: &str, wanted: Role) -> EngineError {
    match policy_role(name) {
        Some(role) => EngineError::WrongRole {
            name: name.to_string(),
            role,
            wanted,
        },
        None => EngineError::UnknownPolicy(name.to_string()),
    }
}

fn proof_snake(g: &Graph, c: &Classification) -> Option<Box<dyn SnakePolicy>> {
    if c.verdict != Verdict::Winnable {
        return None;
    }
    match c.certificate.as_ref()? {
        Certificate::Theta { theta } => theta_snake_policy(g, theta.clone())
            .ok()
            .map(|p| Box::new(p) as _),
        Certificate::HamiltonianCycle { cycle } => hamiltonian_snake_policy(g, Some(cycle.clone()))
            .ok()
            .map(|p| Box::new(p) as _),
        Certificate::CutVertex { vertex, .. } => {
            cut_vertex_snake_policy(g, *vertex).ok().map(|p| Box::new(p) as _)
        }
        _ => None,
    }
}

fn proof_placer(g: &Graph, c: &Classification) -> Option<Box<dyn PlacerPolicy>> {
    match c.reason? {
        Reason::DegreeOne | Reason::ThreePlusComponents | Reason::CutVertexObstruction => {
            connectivity_placer_policy(g).ok().map(|p| Box::new(p) as _)
        }
        Reason::BipartiteImbalance | Reason::OddBipartiteNoTheta => {
            odd_bipartite_placer_policy(g).ok().map(|p| Box::new(p) as _)
        }
        Reason::GirthGT6NonHam => girth_placer_policy(g).ok().map(|p| Box::new(p) as _),
        _ => None,
    }
}

/// Policies available to one session.
pub struct Engine {
    ceiling: usize,
    proof_snake: Option<Box<dyn SnakePolicy>>,
    proof_placer: Option<Box<dyn PlacerPolicy>>,
    /// A named policy replaces the solver and proof rungs for the engine's moves.
    named_snake: Option<Box<dyn SnakePolicy>>,
    named_placer: Option<Box<dyn PlacerPolicy>>,
}

impl Engine {
    /// `policy` is `None` or `"optimal"` for the full ladder, else the name
    /// of a policy for the `role` the engine plays.
    pub fn new(g: &Graph, role: Role, policy: Option<&str>, ceiling: usize) -> Result<Engine, EngineError> {
        let c = classify(g).unwrap_or_else(|_| Classification::unknown());
        let mut e = Engine {
            ceiling,
            proof_snake: proof_snake(g, &c),
            proof_placer: proof_placer(g, &c),
            named_snake: None,
            named_placer: None,
        };
        match (policy, role) {
            (None | Some("optimal"), _) => {}
            (Some(name), Role::Snake) => e.named_snake = Some(named_snake_policy(g, name)?),
            (Some(name), Role::Placer) => e.named_placer = Some(named_placer_policy(g, name)?),
        }
        Ok(e)
    }

    /// The vertex the snake spawns on when the engine is the placer.
    pub fn spawn(&self, g: &Graph) -> Choice {
        let choice = |vertex, source, policy, optimal| Choice {
            role: Role::Placer,
            vertex,
            source,
            policy,
            optimal,
        };
        if let Some(p) = &self.named_placer {
            return choice(p.spawn(g), source_of(Some(p.name())), p.name(), false);
        }
        if let Ok(w) = Solver::with_ceiling(g, self.ceiling).and_then(|mut s| s.winnable()) {
            // any spawn is optimal when the graph is winnable
            let a0 = w.witness.map_or(0, |(a0, _)| a0);
            return choice(a0, Source::Solver, "solver", true);
        }
        match &self.proof_placer {
            Some(p) => choice(p.spawn(g), Source::ProofPolicy, p.name(), false),
            None => choice(FarthestPlacer.spawn(g), Source::Heuristic, "farthest", false),
        }
    }

    /// The engine's own move for the side to move in `game`.
    pub fn choose(&self, game: &Game) -> Result<Choice, EngineError> {
        let role = game.to_move().ok_or(EngineError::GameOver)?;
        match role {
            Role::Snake if self.named_snake.is_some() => {
                let p = self.named_snake.as_deref();
                self.snake_rungs(game, false, p, source_of(p.map(|p| p.name())))
            }
            Role::Placer if self.named_placer.is_some() => {
                let p = self.named_placer.as_deref();
                self.placer_rungs(game, false, p, source_of(p.map(|p| p.name())))
            }
            _ => self.hint(game),
        }
    }

    /// The full ladder for the side to move, whoever plays it.
    pub fn hint(&self, game: &Game) -> Result<Choice, EngineError> {
        match game.to_move().ok_or(EngineError::GameOver)? {
            Role::Snake => self.snake_rungs(game, true, self.proof_snake.as_deref(), Source::ProofPolicy),
            Role::Placer => self.placer_rungs(game, true, self.proof_placer.as_deref(), Source::ProofPolicy),
        }
    }

    fn snake_rungs(
        &self,
        game: &Game,
        use_solver: bool,
        policy: Option<&dyn SnakePolicy>,
        source: Source,
    ) -> Result<Choice, EngineError> {
        let pick = |vertex, source, policy| choice(Role::Snake, vertex, source, policy);
        if let Some(v) = use_solver.then(|| self.solver_move(game)).flatten() {
            return Ok(pick(v, Source::Solver, "solver"));
        }
        if let Some(p) = policy {
            if let Ok(t) = p.choose(game.graph(), game.state()) {
                if snake_move_ok(game, t) {
                    return Ok(pick(t, source, p.name()));
                }
            }
        }
        let t = greedy_snake(game).ok_or(EngineError::GameOver)?;
        Ok(pick(t, Source::Heuristic, "greedy"))
    }

    fn placer_rungs(
        &self,
        game: &Game,
        use_solver: bool,
        policy: Option<&dyn PlacerPolicy>,
        source: Source,
    ) -> Result<Choice, EngineError> {
        let (g, s) = (game.graph(), game.state());
        let pick = |vertex, source, policy| choice(Role::Placer, vertex, source, policy);
        if let Some(v) = use_solver.then(|| self.solver_move(game)).flatten() {
            return Ok(pick(v, Source::Solver, "solver"));
        }
        if let Some(p) = policy {
            if let Ok(a) = p.choose(g, s) {
                if place_apple(g, s, a).is_ok() {
                    return Ok(pick(a, source, p.name()));
                }
            }
        }
        let a = FarthestPlacer.choose(g, s).map_err(|_| EngineError::GameOver)?;
        Ok(pick(a, Source::Heuristic, "farthest"))
    }

    fn solver_move(&self, game: &Game) -> Option<usize> {
        let mut solver = Solver::with_ceiling(game.graph(), self.ceiling).ok()?;
        solver
            .solve_avoiding(game.state(), game.epoch_history())
            .ok()?
            .best_move
    }
}

fn source_of(name: Option<&str>) -> Source {
    match name {
        Some("greedy" | "farthest") | None => Source::Heuristic,
        Some(_) => Source::ProofPolicy,
    }
}

fn choice(role: Role, vertex: usize, source: Source, policy: &'static str) -> Choice {
    Choice {
        role,
        vertex,
        source,
        policy,
        optimal: source == Source::Solver,
    }
}

/// Legal, and does not recreate a body seen this epoch.
fn snake_move_ok(game: &Game, t: usize) -> bool {
    match classify_move(game.graph(), game.state(), t) {
        Ok(MoveKind::Alpha) => true,
        Ok(_) => !game.epoch_history().contains(&stepped(game.state(), t)),
        Err(_) => false,
    }
}

fn stepped(s: &SnakeState, t: usize) -> Vec<usize> {
    let body = s.body();
    let mut b = Vec::with_capacity(body.len());
    b.push(t);
    b.extend_from_slice(&body[..body.len() - 1]);
    b
}

/// The greedy snake's choice, or the smallest move that avoids a repetition
/// when the greedy choice would repeat.
fn greedy_snake(game: &Game) -> Option<usize> {
    let g = game.graph();
    let s = game.state();
    let greedy = GreedySnake.choose(g, s).ok();
    if let Some(t) = greedy.filter(|&t| snake_move_ok(game, t)) {
        return Some(t);
    }
    game.legal_moves()
        .into_iter()
        .map(|(t, _)| t)
        .find(|&t| snake_move_ok(game, t))
        .or(greedy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use snakegraph::graph::{bowtie, cycle, path};

    #[test]
    fn roles_of_names() {
        assert_eq!(policy_role("theta"), Some(Role::Snake));
        assert_eq!(policy_role("girth"), Some(Role::Placer));
        assert_eq!(policy_role("nope"), None);
        let g = cycle(5);
        assert!(matches!(
            Engine::new(&g, Role::Snake, Some("girth"), 10),
            Err(EngineError::WrongRole { .. })
        ));
        assert!(matches!(
            Engine::new(&g, Role::Snake, Some("nope"), 10),
            Err(EngineError::UnknownPolicy(_))
        ));
    }

    #[test]
    fn ladder_falls_back_when_the_solver_is_capped() {
        let g = bowtie();
        let mut game = Game::new(g.clone(), 0).unwrap();
        game.place_apple(3).unwrap();
        let full = Engine::new(&g, Role::Snake, None, DEFAULT_ENGINE_CEILING).unwrap();
        let c = full.choose(&game).unwrap();
        assert_eq!((c.source, c.optimal), (Source::Solver, true));
        // a zero ceiling trips at once; the bowtie's cut vertex schedule takes over
        let capped = Engine::new(&g, Role::Snake, None, 0).unwrap();
        let c = capped.choose(&game).unwrap();
        assert_eq!((c.source, c.policy), (Source::ProofPolicy, "cut-vertex"));
        assert!(snake_move_ok(&game, c.vertex));
    }

    #[test]
    fn path_placer_wins_with_the_solver() {
        let g = path(4);
        let e = Engine::new(&g, Role::Placer, None, DEFAULT_ENGINE_CEILING).unwrap();
        let spawn = e.spawn(&g);
        assert_eq!(spawn.source, Source::Solver);
        let mut game = Game::new(g, spawn.vertex).unwrap();
        while game.to_move().is_some() {
            let c = e.choose(&game).unwrap();
            match c.role {
                Role::Placer => game.place_apple(c.vertex).unwrap(),
                Role::Snake => {
                    game.snake_move(GreedySnake.choose(game.graph(), game.state()).unwrap())
                        .unwrap();
                }
            }
        }
        assert_ne!(game.status(), snakegraph::game::GameStatus::SnakeWins);
    }
}
