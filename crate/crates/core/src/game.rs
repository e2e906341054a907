//! Game rules: states, legal moves, move application and terminal detection.
//!
//! A position is the ordered body alone. Within one length epoch the apple
//! never moves, so comparing bodies and comparing (body, apple) pairs give
//! the same repetition rule.

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphDoc, GraphError, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("game graphs need at least 3 vertices, got {0}")]
    GraphTooSmall(usize),
    #[error("game graphs must be connected")]
    Disconnected,
    #[error("vertex {vertex} does not exist in a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("the game is over")]
    GameOver,
    #[error("turn rule: the apple placer is to move")]
    PlacerToMove,
    #[error("turn rule: the snake is to move")]
    SnakeToMove,
    #[error("adjacency rule: {to} is not adjacent to the head {head}")]
    NotAdjacent { head: usize, to: usize },
    #[error("occupancy rule: {0} is occupied by the body and is not the tail")]
    Occupied(usize),
    #[error("short snake rule: a snake of length {len} may not move onto its tail")]
    ShortTail { len: usize },
    #[error("apple rule: the apple must go on an unoccupied vertex, {0} is occupied")]
    AppleOnBody(usize),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GameError {
    /// Short stable name of the violated rule.
    pub fn rule(&self) -> &'static str {
        match self {
            GameError::GraphTooSmall(_) | GameError::Disconnected | GameError::Graph(_) => "graph",
            GameError::InvalidVertex { .. } => "vertex-range",
            GameError::GameOver => "game-over",
            GameError::PlacerToMove | GameError::SnakeToMove => "turn",
            GameError::NotAdjacent { .. } => "adjacency",
            GameError::Occupied(_) => "occupancy",
            GameError::ShortTail { .. } => "short-tail",
            GameError::AppleOnBody(_) => "apple-unoccupied",
            GameError::InvalidState(_) => "state",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Head onto the apple; the tail stays and the snake grows.
    Alpha,
    /// Head onto an unoccupied vertex without the apple; the tail advances.
    Beta,
    /// Head onto the tail vertex; the occupied set is unchanged.
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LossReason {
    Stuck,
    Repetition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameStatus {
    Ongoing,
    SnakeWins,
    SnakeLoses(LossReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Snake,
    Placer,
}

/// Body (head first) and the apple, if one is on the board.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SnakeState {
    body: Vec<usize>,
    apple: Option<usize>,
}

impl SnakeState {
    /// Builds a state after checking it against `g`.
    pub fn new(g: &Graph, body: Vec<usize>, apple: Option<usize>) -> Result<Self, GameError> {
        let s = SnakeState { body, apple };
        s.check(g)?;
        Ok(s)
    }

    pub fn body(&self) -> &[usize] {
        &self.body
    }

    pub fn apple(&self) -> Option<usize> {
        self.apple
    }

    pub fn head(&self) -> usize {
        self.body[0]
    }

    pub fn tail(&self) -> usize {
        self.body[self.body.len() - 1]
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn occupied(&self) -> VertexSet {
        self.body.iter().copied().collect()
    }

    pub fn unoccupied(&self, g: &Graph) -> VertexSet {
        g.vertex_set().difference(self.occupied())
    }

    /// Whose turn it is, or `None` once the snake fills the graph.
    pub fn to_move(&self, g: &Graph) -> Option<Role> {
        if self.len() == g.n() {
            None
        } else if self.apple.is_some() {
            Some(Role::Snake)
        } else {
            Some(Role::Placer)
        }
    }

    /// Checks every state invariant against `g`.
    pub fn check(&self, g: &Graph) -> Result<(), GameError> {
        let bad = |m: String| Err(GameError::InvalidState(m));
        if self.body.is_empty() || self.body.len() > g.n() {
            return bad(format!("body length {} outside 1..={}", self.body.len(), g.n()));
        }
        if !g.is_simple_path(&self.body) {
            return bad(format!("body {:?} is not a simple path", self.body));
        }
        match self.apple {
            Some(a) if a >= g.n() => bad(format!("apple {a} out of range")),
            Some(a) if self.body.contains(&a) => bad(format!("apple {a} lies on the body")),
            Some(_) if self.body.len() == g.n() => bad("apple present on a full board".into()),
            _ => Ok(()),
        }
    }
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), GameError> {
    if v < g.n() {
        Ok(())
    } else {
        Err(GameError::InvalidVertex { vertex: v, n: g.n() })
    }
}

/// Checks that `g` is usable as a game board.
pub fn check_board(g: &Graph) -> Result<(), GameError> {
    if g.n() < 3 {
        return Err(GameError::GraphTooSmall(g.n()));
    }
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    Ok(())
}

/// The snake spawns on the first apple `a0`; the placer moves next.
pub fn new_game(g: &Graph, a0: usize) -> Result<SnakeState, GameError> {
    check_board(g)?;
    check_vertex(g, a0)?;
    Ok(SnakeState {
        body: vec![a0],
        apple: None,
    })
}

/// Kind of the move to `target`, or the rule it breaks.
pub fn classify_move(g: &Graph, s: &SnakeState, target: usize) -> Result<MoveKind, GameError> {
    check_vertex(g, target)?;
    let Some(apple) = s.apple else {
        return Err(if s.len() == g.n() {
            GameError::GameOver
        } else {
            GameError::PlacerToMove
        });
    };
    let head = s.head();
    if !g.has_edge(head, target) {
        return Err(GameError::NotAdjacent { head, to: target });
    }
    if target == apple {
        return Ok(MoveKind::Alpha);
    }
    if target == s.tail() {
        return if s.len() <= 2 {
            Err(GameError::ShortTail { len: s.len() })
        } else {
            Ok(MoveKind::Gamma)
        };
    }
    if s.body.contains(&target) {
        return Err(GameError::Occupied(target));
    }
    Ok(MoveKind::Beta)
}

/// Legal targets in increasing vertex order, each with its kind. Empty when
/// the placer is to move or the game is won.
pub fn legal_moves(g: &Graph, s: &SnakeState) -> Vec<(usize, MoveKind)> {
    if s.apple.is_none() {
        return Vec::new();
    }
    g.neighbors(s.head())
        .iter()
        .filter_map(|&t| classify_move(g, s, t).ok().map(|k| (t, k)))
        .collect()
}

pub fn apply_move(g: &Graph, s: &SnakeState, target: usize) -> Result<SnakeState, GameError> {
    let kind = classify_move(g, s, target)?;
    let mut body = Vec::with_capacity(s.len() + 1);
    body.push(target);
    match kind {
        MoveKind::Alpha => {
            body.extend_from_slice(&s.body);
            Ok(SnakeState { body, apple: None })
        }
        MoveKind::Beta | MoveKind::Gamma => {
            body.extend_from_slice(&s.body[..s.len() - 1]);
            Ok(SnakeState { body, apple: s.apple })
        }
    }
}

pub fn place_apple(g: &Graph, s: &SnakeState, a: usize) -> Result<SnakeState, GameError> {
    check_vertex(g, a)?;
    if s.len() == g.n() {
        return Err(GameError::GameOver);
    }
    if s.apple.is_some() {
        return Err(GameError::SnakeToMove);
    }
    if s.body.contains(&a) {
        return Err(GameError::AppleOnBody(a));
    }
    Ok(SnakeState {
        body: s.body.clone(),
        apple: Some(a),
    })
}

/// Vertices of the head graph: the unoccupied vertices plus the head.
pub fn head_graph_vertices(g: &Graph, s: &SnakeState) -> VertexSet {
    s.unoccupied(g).with(s.head())
}

/// Subgraph induced by the unoccupied vertices and the head, relabelled in
/// increasing order of the original ids.
pub fn head_graph(g: &Graph, s: &SnakeState) -> Graph {
    let vs: Vec<usize> = head_graph_vertices(g, s).iter().collect();
    g.induced_subgraph(&vs)
}

pub fn head_graph_is_complete(g: &Graph, s: &SnakeState) -> bool {
    g.is_clique(head_graph_vertices(g, s))
}

/// Status of `s` given the earlier bodies of the current length epoch.
pub fn status(g: &Graph, s: &SnakeState, history: &[Vec<usize>]) -> GameStatus {
    if s.len() == g.n() {
        GameStatus::SnakeWins
    } else if history.iter().any(|b| b == &s.body) {
        GameStatus::SnakeLoses(LossReason::Repetition)
    } else if s.apple.is_some() && legal_moves(g, s).is_empty() {
        GameStatus::SnakeLoses(LossReason::Stuck)
    } else {
        GameStatus::Ongoing
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceEvent {
    Snake(usize),
    Apple(usize),
}

pub const TRACE_VERSION: u32 = 1;

/// A recorded game: the board, the spawn vertex and every later action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub version: u32,
    pub graph: GraphDoc,
    pub first_apple: usize,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    /// Replays the trace, validating every action.
    pub fn replay(&self) -> Result<Game, GameError> {
        if self.version != TRACE_VERSION {
            return Err(GameError::InvalidState(format!(
                "unsupported trace version {}",
                self.version
            )));
        }
        let g = Graph::from_doc(&self.graph)?.graph;
        let mut game = Game::new(g, self.first_apple)?;
        for &e in &self.events {
            match e {
                TraceEvent::Snake(t) => {
                    game.snake_move(t)?;
                }
                TraceEvent::Apple(a) => game.place_apple(a)?,
            }
        }
        Ok(game)
    }
}

/// A game in progress with its repetition history and trace.
#[derive(Clone, Debug)]
pub struct Game {
    graph: Graph,
    first_apple: usize,
    state: SnakeState,
    epoch: FxHashSet<Vec<usize>>,
    events: Vec<TraceEvent>,
    status: GameStatus,
}

impl Game {
    pub fn new(graph: Graph, a0: usize) -> Result<Self, GameError> {
        let state = new_game(&graph, a0)?;
        Ok(Game {
            graph,
            first_apple: a0,
            state,
            epoch: FxHashSet::default(),
            events: Vec::new(),
            status: GameStatus::Ongoing,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state(&self) -> &SnakeState {
        &self.state
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    /// Bodies seen so far in the current length epoch, current one included.
    pub fn epoch_history(&self) -> &FxHashSet<Vec<usize>> {
        &self.epoch
    }

    pub fn to_move(&self) -> Option<Role> {
        match self.status {
            GameStatus::Ongoing => self.state.to_move(&self.graph),
            _ => None,
        }
    }

    pub fn legal_moves(&self) -> Vec<(usize, MoveKind)> {
        match self.status {
            GameStatus::Ongoing => legal_moves(&self.graph, &self.state),
            _ => Vec::new(),
        }
    }

    pub fn snake_move(&mut self, target: usize) -> Result<MoveKind, GameError> {
        if self.status != GameStatus::Ongoing {
            return Err(GameError::GameOver);
        }
        let kind = classify_move(&self.graph, &self.state, target)?;
        self.state = apply_move(&self.graph, &self.state, target)?;
        self.events.push(TraceEvent::Snake(target));
        if kind == MoveKind::Alpha {
            self.epoch.clear();
            if self.state.len() == self.graph.n() {
                self.status = GameStatus::SnakeWins;
            }
        } else if !self.epoch.insert(self.state.body.clone()) {
            self.status = GameStatus::SnakeLoses(LossReason::Repetition);
        } else {
            self.check_stuck();
        }
        Ok(kind)
    }

    pub fn place_apple(&mut self, a: usize) -> Result<(), GameError> {
        if self.status != GameStatus::Ongoing {
            return Err(GameError::GameOver);
        }
        self.state = place_apple(&self.graph, &self.state, a)?;
        self.events.push(TraceEvent::Apple(a));
        self.epoch.insert(self.state.body.clone());
        self.check_stuck();
        Ok(())
    }

    fn check_stuck(&mut self) {
        if legal_moves(&self.graph, &self.state).is_empty() {
            self.status = GameStatus::SnakeLoses(LossReason::Stuck);
        }
    }

    pub fn trace(&self) -> Trace {
        Trace {
            version: TRACE_VERSION,
            graph: self.graph.to_doc(),
            first_apple: self.first_apple,
            events: self.events.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bowtie, complete, cycle, path};

    #[test]
    fn two_step_start() {
        let g = cycle(5);
        let s = new_game(&g, 0).unwrap();
        assert_eq!(s.to_move(&g), Some(Role::Placer));
        let s = place_apple(&g, &s, 2).unwrap();
        assert_eq!((s.body(), s.apple()), (&[0][..], Some(2)));
        let s0 = new_game(&g, 0).unwrap();
        assert_eq!(place_apple(&g, &s0, 0), Err(GameError::AppleOnBody(0)));
        assert_eq!(new_game(&path(2), 0), Err(GameError::GraphTooSmall(2)));
    }

    #[test]
    fn short_snake_on_triangle_can_only_eat() {
        let g = complete(3);
        let s = SnakeState::new(&g, vec![0, 1], Some(2)).unwrap();
        assert_eq!(legal_moves(&g, &s), vec![(2, MoveKind::Alpha)]);
        assert_eq!(apply_move(&g, &s, 1), Err(GameError::ShortTail { len: 2 }));
    }

    #[test]
    fn four_of_five_on_c5_has_one_move() {
        let g = cycle(5);
        let s = SnakeState::new(&g, vec![3, 2, 1, 0], Some(4)).unwrap();
        assert_eq!(legal_moves(&g, &s), vec![(4, MoveKind::Alpha)]);
    }

    #[test]
    fn full_board_has_no_moves() {
        let g = cycle(6);
        let s = SnakeState::new(&g, vec![5, 4, 3, 2, 1, 0], None).unwrap();
        assert!(legal_moves(&g, &s).is_empty());
        assert_eq!(status(&g, &s, &[]), GameStatus::SnakeWins);
    }

    #[test]
    fn move_kinds_update_the_body() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (2, 0), (3, 4)]).unwrap();
        let s = SnakeState::new(&g, vec![0, 1, 2], Some(4)).unwrap();
        assert_eq!(apply_move(&g, &s, 3).unwrap().body(), &[3, 0, 1]);
        let gamma = apply_move(&g, &s, 2).unwrap();
        assert_eq!(gamma.body(), &[2, 0, 1]);
        assert_eq!(gamma.occupied(), s.occupied());
        let s = SnakeState::new(&g, vec![3, 0, 1], Some(4)).unwrap();
        let a = apply_move(&g, &s, 4).unwrap();
        assert_eq!((a.body(), a.apple()), (&[4, 3, 0, 1][..], None));
    }

    #[test]
    fn errors_name_the_rule() {
        let g = cycle(6);
        let s = SnakeState::new(&g, vec![0, 1, 2], Some(4)).unwrap();
        let e = apply_move(&g, &s, 3).unwrap_err();
        assert_eq!(e.rule(), "adjacency");
        assert!(e.to_string().contains("adjacency rule"));
        assert_eq!(apply_move(&g, &s, 1).unwrap_err().rule(), "occupancy");
        let t = SnakeState::new(&g, vec![0, 1], None).unwrap();
        assert_eq!(place_apple(&g, &t, 1).unwrap_err().rule(), "apple-unoccupied");
    }

    #[test]
    fn eating_the_last_apple_wins() {
        let g = cycle(4);
        let mut game = Game::new(g, 0).unwrap();
        game.place_apple(1).unwrap();
        game.snake_move(1).unwrap();
        game.place_apple(2).unwrap();
        game.snake_move(2).unwrap();
        game.place_apple(3).unwrap();
        assert_eq!(game.snake_move(3), Ok(MoveKind::Alpha));
        assert_eq!(game.status(), GameStatus::SnakeWins);
        assert_eq!(game.to_move(), None);
        assert_eq!(game.place_apple(0), Err(GameError::GameOver));
    }

    #[test]
    fn degree_one_trap_is_stuck() {
        let g = path(3);
        let mut game = Game::new(g, 1).unwrap();
        game.place_apple(0).unwrap();
        game.snake_move(0).unwrap();
        game.place_apple(2).unwrap();
        assert_eq!(game.status(), GameStatus::SnakeLoses(LossReason::Stuck));
    }

    #[test]
    fn repetition_loses() {
        let g = cycle(6);
        let mut game = Game::new(g, 0).unwrap();
        game.place_apple(3).unwrap();
        game.snake_move(1).unwrap();
        assert_eq!(game.status(), GameStatus::Ongoing);
        game.snake_move(0).unwrap();
        assert_eq!(game.status(), GameStatus::SnakeLoses(LossReason::Repetition));
        let s = SnakeState::new(game.graph(), vec![0], Some(3)).unwrap();
        assert_eq!(
            status(game.graph(), &s, &[vec![0]]),
            GameStatus::SnakeLoses(LossReason::Repetition)
        );
    }

    #[test]
    fn head_graph_examples() {
        let g = bowtie();
        let s = new_game(&g, 3).unwrap();
        assert_eq!(head_graph(&g, &s), g);
        let s = SnakeState::new(&g, vec![0, 1, 2], None).unwrap();
        let h = head_graph(&g, &s);
        assert_eq!(h.n(), 3);
        assert!(h.is_complete());
        let full = SnakeState::new(&g, vec![3, 4, 0, 1, 2], None).unwrap();
        assert_eq!(head_graph(&g, &full).n(), 1);
    }

    #[test]
    fn trace_replays_to_the_same_game() {
        let mut game = Game::new(bowtie(), 0).unwrap();
        game.place_apple(1).unwrap();
        game.snake_move(1).unwrap();
        game.place_apple(3).unwrap();
        let trace = game.trace();
        let json = serde_json::to_string(&trace).unwrap();
        assert!(json.contains(r#"{"snake":1}"#));
        let back: Trace = serde_json::from_str(&json).unwrap();
        let replayed = back.replay().unwrap();
        assert_eq!(replayed.state(), game.state());
        assert_eq!(replayed.status(), game.status());
        let mut bad = trace;
        bad.events.push(TraceEvent::Snake(4));
        assert_eq!(bad.replay().unwrap_err().rule(), "adjacency");
    }
}
