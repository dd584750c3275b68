//! MSO₁ formulas for distance two and for `k`-L(p,q)-labeling, rendered in a
//! prefix S-expression syntax, with a brute-force checker for tiny graphs.
//!
//! Grammar (see `docs/mso-grammar.md`):
//!
//! ```text
//! formula := (and formula*) | (or formula*) | (not formula)
//!          | (exists-vertex VAR formula) | (forall-vertex VAR formula)
//!          | (exists-set (SET*) formula)
//!          | (in VAR SET) | (adj VAR VAR) | (neq VAR VAR)
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{Label, PqParams};

pub const CHECK_MAX_VERTICES: usize = 8;
pub const CHECK_MAX_K: Label = 6;
/// Cap on `n·(number of sets)` when the set block is not a partition.
pub const CHECK_MAX_FREE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    ExistsVertex(String, Box<Formula>),
    ForallVertex(String, Box<Formula>),
    ExistsSet(Vec<String>, Box<Formula>),
    In(String, String),
    Adj(String, String),
    Neq(String, String),
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, items: &[Formula]| {
            write!(f, "({op}")?;
            for item in items {
                write!(f, " {item}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::And(items) => list(f, "and", items),
            Formula::Or(items) => list(f, "or", items),
            Formula::Not(inner) => write!(f, "(not {inner})"),
            Formula::ExistsVertex(v, body) => write!(f, "(exists-vertex {v} {body})"),
            Formula::ForallVertex(v, body) => write!(f, "(forall-vertex {v} {body})"),
            Formula::ExistsSet(sets, body) => write!(f, "(exists-set ({}) {body})", sets.join(" ")),
            Formula::In(v, s) => write!(f, "(in {v} {s})"),
            Formula::Adj(u, v) => write!(f, "(adj {u} {v})"),
            Formula::Neq(u, v) => write!(f, "(neq {u} {v})"),
        }
    }
}

fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Or(vec![not(a), b])
}

fn forall(v: &str, body: Formula) -> Formula {
    Formula::ForallVertex(v.into(), Box::new(body))
}

fn member(v: &str, i: Label) -> Formula {
    Formula::In(v.into(), set_name(i))
}

fn set_name(i: Label) -> String {
    format!("V{i}")
}

/// `u` and `w` are at distance exactly two, witnessed by a middle vertex
/// bound to `mid`.
pub fn dist2_formula(u: &str, w: &str, mid: &str) -> Formula {
    let (u, w, mid) = (u.to_string(), w.to_string(), mid.to_string());
    Formula::And(vec![
        Formula::Neq(u.clone(), w.clone()),
        not(Formula::Adj(u.clone(), w.clone())),
        Formula::ExistsVertex(
            mid.clone(),
            Box::new(Formula::And(vec![
                Formula::Neq(u.clone(), mid.clone()),
                Formula::Neq(mid.clone(), w.clone()),
                Formula::Adj(u, mid.clone()),
                Formula::Adj(mid, w),
            ])),
        ),
    ])
}

pub fn emit_dist2() -> String {
    format!("{}\n", dist2_formula("u", "w", "v"))
}

/// Every vertex lies in exactly one of `V_0..V_k`.
fn partition_formula(k: Label) -> Formula {
    forall(
        "v",
        Formula::Or(
            (0..=k)
                .map(|i| {
                    let mut parts = vec![member("v", i)];
                    parts.extend((0..=k).filter(|&j| j != i).map(|j| not(member("v", j))));
                    Formula::And(parts)
                })
                .collect(),
        ),
    )
}

/// `u ∈ V_i` and `v ∉ V_j` for every `j` within `gap − 1` of `i`, over all
/// `i`, with the window clipped to `[0, k]`.
fn separated(k: Label, gap: u32) -> Formula {
    Formula::Or(
        (0..=k)
            .map(|i| {
                let lo = i.saturating_sub(gap - 1);
                let hi = (i + gap - 1).min(k);
                let window = (lo..=hi).map(|j| not(member("v", j))).collect();
                Formula::And(vec![member("u", i), Formula::And(window)])
            })
            .collect(),
    )
}

pub fn phi_formula(k: Label, params: PqParams) -> Formula {
    let sets = (0..=k).map(set_name).collect();
    let body = Formula::And(vec![
        partition_formula(k),
        forall(
            "u",
            forall("v", implies(Formula::Adj("u".into(), "v".into()), separated(k, params.p))),
        ),
        forall(
            "u",
            forall("v", implies(dist2_formula("u", "v", "w"), separated(k, params.q))),
        ),
    ]);
    Formula::ExistsSet(sets, Box::new(body))
}

/// The sentence that holds exactly when a `k`-L(p,q)-labeling exists.
pub fn emit_phi(k: Label, params: PqParams) -> String {
    format!("{}\n", phi_formula(k, params))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut chars = line.char_indices().peekable();
        while let Some(&(start, c)) = chars.peek() {
            match c {
                '(' => {
                    out.push((line_no, Token::Open));
                    chars.next();
                }
                ')' => {
                    out.push((line_no, Token::Close));
                    chars.next();
                }
                c if c.is_whitespace() => {
                    chars.next();
                }
                c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                    let mut end = start;
                    while let Some(&(j, c)) = chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                            end = j + c.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push((line_no, Token::Atom(line[start..end].to_string())));
                }
                other => return Err(Error::parse(line_no, format!("unexpected character {other:?}"))),
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.tokens
            .get(self.at)
            .or(self.tokens.last())
            .map_or(1, |(l, _)| *l)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self
            .tokens
            .get(self.at)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| Error::parse(self.line(), "unexpected end of formula"))?;
        self.at += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let line = self.line();
        let got = self.next()?;
        if got != want {
            return Err(Error::parse(line, format!("expected {want:?}, found {got:?}")));
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        let line = self.line();
        match self.next()? {
            Token::Atom(a) if a.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') => Ok(a),
            other => Err(Error::parse(line, format!("expected a name, found {other:?}"))),
        }
    }

    fn peek_close(&self) -> bool {
        matches!(self.tokens.get(self.at), Some((_, Token::Close)))
    }

    fn formula(&mut self) -> Result<Formula> {
        self.expect(Token::Open)?;
        let line = self.line();
        let op = match self.next()? {
            Token::Atom(a) => a,
            other => return Err(Error::parse(line, format!("expected an operator, found {other:?}"))),
        };
        let f = match op.as_str() {
            "and" | "or" => {
                let mut items = Vec::new();
                while !self.peek_close() {
                    items.push(self.formula()?);
                }
                if op == "and" {
                    Formula::And(items)
                } else {
                    Formula::Or(items)
                }
            }
            "not" => not(self.formula()?),
            "exists-vertex" => {
                let v = self.ident()?;
                Formula::ExistsVertex(v, Box::new(self.formula()?))
            }
            "forall-vertex" => {
                let v = self.ident()?;
                Formula::ForallVertex(v, Box::new(self.formula()?))
            }
            "exists-set" => {
                self.expect(Token::Open)?;
                let mut sets = Vec::new();
                while !self.peek_close() {
                    sets.push(self.ident()?);
                }
                self.expect(Token::Close)?;
                Formula::ExistsSet(sets, Box::new(self.formula()?))
            }
            "in" => Formula::In(self.ident()?, self.ident()?),
            "adj" => Formula::Adj(self.ident()?, self.ident()?),
            "neq" => Formula::Neq(self.ident()?, self.ident()?),
            other => return Err(Error::parse(line, format!("unknown operator {other:?}"))),
        };
        self.expect(Token::Close)?;
        Ok(f)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if p.at != p.tokens.len() {
        return Err(Error::parse(p.line(), "trailing input after formula"));
    }
    Ok(f)
}

/// Formula with variables resolved to slots and sets to indices.
enum Node {
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
    In(usize, usize),
    Adj(usize, usize),
    Neq(usize, usize),
}

struct Compiler<'a> {
    vars: Vec<String>,
    sets: &'a [String],
    slots: usize,
}

impl Compiler<'_> {
    fn var(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .rposition(|v| v == name)
            .ok_or_else(|| Error::Precondition(format!("unbound vertex variable {name}")))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::And(items) => Node::And(items.iter().map(|i| self.compile(i)).collect::<Result<_>>()?),
            Formula::Or(items) => Node::Or(items.iter().map(|i| self.compile(i)).collect::<Result<_>>()?),
            Formula::Not(inner) => Node::Not(Box::new(self.compile(inner)?)),
            Formula::ExistsVertex(v, body) | Formula::ForallVertex(v, body) => {
                self.vars.push(v.clone());
                self.slots = self.slots.max(self.vars.len());
                let slot = self.vars.len() - 1;
                let body = Box::new(self.compile(body)?);
                self.vars.pop();
                if matches!(f, Formula::ExistsVertex(..)) {
                    Node::Exists(slot, body)
                } else {
                    Node::Forall(slot, body)
                }
            }
            Formula::ExistsSet(..) => {
                return Err(Error::Precondition(
                    "set quantifiers must form the outermost block".into(),
                ))
            }
            Formula::In(v, s) => {
                let set = self
                    .sets
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| Error::Precondition(format!("unbound set variable {s}")))?;
                Node::In(self.var(v)?, set)
            }
            Formula::Adj(u, v) => Node::Adj(self.var(u)?, self.var(v)?),
            Formula::Neq(u, v) => Node::Neq(self.var(u)?, self.var(v)?),
        })
    }
}

/// Set membership known so far; `None` means undecided.
trait Membership {
    fn get(&self, v: usize, set: usize) -> Option<bool>;
}

/// Each vertex in exactly one set, or not yet placed.
struct Partition(Vec<Option<usize>>);

impl Membership for Partition {
    fn get(&self, v: usize, set: usize) -> Option<bool> {
        self.0[v].map(|s| s == set)
    }
}

/// Independent membership bits, `sets` per vertex.
struct Bits {
    sets: usize,
    bits: Vec<Option<bool>>,
}

impl Membership for Bits {
    fn get(&self, v: usize, set: usize) -> Option<bool> {
        self.bits[v * self.sets + set]
    }
}

/// Kleene evaluation: `None` when the answer depends on undecided
/// memberships.
fn eval<M: Membership>(node: &Node, g: &Graph, m: &M, env: &mut [usize]) -> Option<bool> {
    match node {
        Node::And(items) => {
            let mut unknown = false;
            for item in items {
                match eval(item, g, m, env) {
                    Some(false) => return Some(false),
                    None => unknown = true,
                    Some(true) => {}
                }
            }
            if unknown { None } else { Some(true) }
        }
        Node::Or(items) => {
            let mut unknown = false;
            for item in items {
                match eval(item, g, m, env) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    Some(false) => {}
                }
            }
            if unknown { None } else { Some(false) }
        }
        Node::Not(inner) => eval(inner, g, m, env).map(|b| !b),
        Node::Exists(slot, body) | Node::Forall(slot, body) => {
            let want = matches!(node, Node::Exists(..));
            let mut unknown = false;
            for v in 0..g.n() {
                env[*slot] = v;
                match eval(body, g, m, env) {
                    Some(b) if b == want => return Some(want),
                    None => unknown = true,
                    Some(_) => {}
                }
            }
            if unknown { None } else { Some(!want) }
        }
        Node::In(slot, set) => m.get(env[*slot], *set),
        Node::Adj(a, b) => Some(g.has_edge(env[*a], env[*b])),
        Node::Neq(a, b) => Some(env[*a] != env[*b]),
    }
}

/// Strips the outer set quantifiers of a sentence.
fn split_sets(f: &Formula) -> (Vec<String>, &Formula) {
    let mut sets = Vec::new();
    let mut body = f;
    while let Formula::ExistsSet(names, inner) = body {
        sets.extend(names.iter().cloned());
        body = inner;
    }
    (sets, body)
}

/// Vertices in breadth-first order per component, so that each vertex after
/// the first of its component has an earlier neighbor.
fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(g.n());
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = out.len();
        out.push(s);
        let mut i = start;
        while i < out.len() {
            for &w in g.neighbors(out[i]) {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
            i += 1;
        }
    }
    out
}

/// Whether `g` satisfies the sentence `text` by enumerating the assignments
/// of its outermost set variables, pruning partial assignments that already
/// falsify the body. When the body's first conjunct forces a partition into
/// `V0..Vk` only partitions are enumerated.
pub fn naive_model_check(g: &Graph, text: &str) -> Result<bool> {
    let f = parse_formula(text)?;
    if g.n() > CHECK_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "naive model check vertices",
            actual: g.n(),
            cap: CHECK_MAX_VERTICES,
            advice: "the checker enumerates every set assignment",
        });
    }
    let (sets, body) = split_sets(&f);
    if sets.len() > CHECK_MAX_K as usize + 1 {
        return Err(Error::CapExceeded {
            what: "naive model check set variables",
            actual: sets.len(),
            cap: CHECK_MAX_K as usize + 1,
            advice: "the checker enumerates every set assignment",
        });
    }
    let mut c = Compiler {
        vars: Vec::new(),
        sets: &sets,
        slots: 0,
    };
    let node = c.compile(body)?;
    let mut env = vec![0; c.slots];
    let order = bfs_order(g);

    let is_partition = !sets.is_empty()
        && sets.iter().enumerate().all(|(i, s)| *s == set_name(i as Label))
        && matches!(body, Formula::And(items)
            if items.first() == Some(&partition_formula(sets.len() as Label - 1)));
    if is_partition {
        let mut m = Partition(vec![None; g.n()]);
        return Ok(search_partition(&node, g, &order, 0, sets.len(), &mut m, &mut env));
    }
    let free_bits = g.n() * sets.len();
    if free_bits > CHECK_MAX_FREE_BITS {
        return Err(Error::CapExceeded {
            what: "naive model check membership bits",
            actual: free_bits,
            cap: CHECK_MAX_FREE_BITS,
            advice: "the checker enumerates every set assignment",
        });
    }
    let mut m = Bits {
        sets: sets.len(),
        bits: vec![None; free_bits],
    };
    Ok(search_bits(&node, g, 0, &mut m, &mut env))
}

fn search_partition(
    node: &Node,
    g: &Graph,
    order: &[usize],
    at: usize,
    sets: usize,
    m: &mut Partition,
    env: &mut [usize],
) -> bool {
    match eval(node, g, m, env) {
        Some(b) => return b,
        None if at == order.len() => unreachable!("a full assignment decides every atom"),
        None => {}
    }
    let v = order[at];
    for s in 0..sets {
        m.0[v] = Some(s);
        if search_partition(node, g, order, at + 1, sets, m, env) {
            return true;
        }
    }
    m.0[v] = None;
    false
}

fn search_bits(node: &Node, g: &Graph, at: usize, m: &mut Bits, env: &mut [usize]) -> bool {
    match eval(node, g, m, env) {
        Some(b) => return b,
        None if at == m.bits.len() => unreachable!("a full assignment decides every atom"),
        None => {}
    }
    for b in [false, true] {
        m.bits[at] = Some(b);
        if search_bits(node, g, at + 1, m, env) {
            return true;
        }
    }
    m.bits[at] = None;
    false
}

/// Ordered pairs `(a, b)`, `a < b`, for which the formula holds with `u ↦ a`
/// and `w ↦ b`. The formula may not mention sets.
pub fn satisfying_pairs(g: &Graph, text: &str, u: &str, w: &str) -> Result<Vec<(usize, usize)>> {
    let f = parse_formula(text)?;
    let mut c = Compiler {
        vars: vec![u.to_string(), w.to_string()],
        sets: &[],
        slots: 2,
    };
    let node = c.compile(&f)?;
    let mut env = vec![0; c.slots];
    let m = Bits { sets: 0, bits: Vec::new() };
    let mut out = Vec::new();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            env[0] = a;
            env[1] = b;
            if eval(&node, g, &m, &mut env) == Some(true) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}
