//! Text form of constraints.
//!
//! ```text
//! expr  := and { "or" and }
//! and   := unary { "and" unary }
//! unary := "not" unary | "(" expr ")" | leaf
//! leaf  := "true" | "false"
//!        | "freq" "(" var ")" cmp NUM | "size" "(" var ")" cmp NUM
//!        | "area" cmp NUM | agg "(" "A" ")" cmp REAL
//!        | var rel setlit
//! var   := "A" | "O"
//! agg   := "min" | "max" | "sum" | "avg"
//! rel   := "subset" | "superset" | "intersects" | "disjoint"
//! cmp   := "<" | ">" | "<=" | ">="
//! setlit := "{" [ name { "," name } ] "}"
//! ```
//!
//! Keywords are case-insensitive, names are not. A name that contains
//! whitespace or punctuation is written as a double-quoted string.

use std::fmt::Write as _;

use cproj_core::{
    Aggregate, BitSet, BooleanDatabase, Cmp, ConceptConstraint, ObjectSet, ProjectedConstraint, SetOperand,
    SetRelation, Space, Var,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("at offset {position}: unknown {space} {name:?}{}", suggest(.suggestions))]
    UnknownName { position: usize, space: &'static str, name: String, suggestions: Vec<String> },
    #[error("at offset {position}: {name:?} is an {found}, but {var} ranges over {expected}s")]
    VarMismatch { position: usize, var: &'static str, name: String, found: &'static str, expected: &'static str },
}

fn suggest(near: &[String]) -> String {
    if near.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", near.join(", "))
    }
}

pub fn parse_constraint(text: &str, db: &BooleanDatabase) -> Result<ConceptConstraint, ParseError> {
    let mut parser = Parser { src: text, pos: 0, db };
    let c = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(c)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    db: &'a BooleanDatabase,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { position: self.pos, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    /// The identifier at the cursor, without consuming it.
    fn peek_word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        &rest[..end]
    }

    fn eat_keyword(&mut self, keyword: &str) -> bool {
        if self.peek_word().eq_ignore_ascii_case(keyword) {
            self.pos += keyword.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ConceptConstraint, ParseError> {
        let mut terms = vec![self.and()?];
        while self.eat_keyword("or") {
            terms.push(self.and()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ConceptConstraint::Or(terms) })
    }

    fn and(&mut self) -> Result<ConceptConstraint, ParseError> {
        let mut terms = vec![self.unary()?];
        while self.eat_keyword("and") {
            terms.push(self.unary()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ConceptConstraint::And(terms) })
    }

    fn unary(&mut self) -> Result<ConceptConstraint, ParseError> {
        if self.eat_keyword("not") {
            return Ok(ConceptConstraint::not(self.unary()?));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        self.leaf()
    }

    fn leaf(&mut self) -> Result<ConceptConstraint, ParseError> {
        let start = self.pos;
        let word = self.peek_word().to_ascii_lowercase();
        match word.as_str() {
            "true" => {
                self.pos += 4;
                Ok(ConceptConstraint::True)
            }
            "false" => {
                self.pos += 5;
                Ok(ConceptConstraint::falsum())
            }
            "freq" | "size" => {
                self.pos += 4;
                self.expect("(")?;
                let var = self.var()?;
                self.expect(")")?;
                let cmp = self.cmp()?;
                let threshold = self.count()?;
                Ok(if word == "freq" {
                    ConceptConstraint::Freq { var, cmp, threshold }
                } else {
                    ConceptConstraint::Size { var, cmp, threshold }
                })
            }
            "area" => {
                self.pos += 4;
                let cmp = self.cmp()?;
                Ok(ConceptConstraint::Area { cmp, threshold: self.count()? })
            }
            "min" | "max" | "sum" | "avg" => {
                self.pos += 3;
                let agg = match word.as_str() {
                    "min" => Aggregate::Min,
                    "max" => Aggregate::Max,
                    "sum" => Aggregate::Sum,
                    _ => Aggregate::Avg,
                };
                self.expect("(")?;
                if self.var()? != Var::Intent {
                    return Err(ParseError::Syntax {
                        position: start,
                        message: format!("{agg} aggregates attribute values and only applies to A"),
                    });
                }
                self.expect(")")?;
                let cmp = self.cmp()?;
                Ok(ConceptConstraint::Agg { agg, cmp, threshold: self.real()? })
            }
            "a" | "o" => {
                let var = self.var()?;
                let rel = self.relation()?;
                let operand = match var {
                    Var::Intent => SetOperand::Intent(self.set_literal(Var::Intent)?.cast()),
                    Var::Extent => SetOperand::Extent(self.set_literal(Var::Extent)?),
                };
                Ok(ConceptConstraint::Set { rel, operand })
            }
            "" => Err(self.error("expected a constraint")),
            other => Err(self.error(format!("unknown keyword {other:?}"))),
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        if self.eat_keyword("a") {
            Ok(Var::Intent)
        } else if self.eat_keyword("o") {
            Ok(Var::Extent)
        } else {
            Err(self.error("expected A or O"))
        }
    }

    fn relation(&mut self) -> Result<SetRelation, ParseError> {
        for rel in SetRelation::ALL {
            if self.eat_keyword(rel.keyword()) {
                return Ok(rel);
            }
        }
        Err(self.error("expected subset, superset, intersects or disjoint"))
    }

    fn cmp(&mut self) -> Result<Cmp, ParseError> {
        for (token, cmp) in [("<=", Cmp::Le), (">=", Cmp::Ge), ("<", Cmp::Lt), (">", Cmp::Gt)] {
            if self.eat(token) {
                return Ok(cmp);
            }
        }
        Err(self.error("expected <, >, <= or >="))
    }

    fn count(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let digits = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if digits == 0 {
            return Err(self.error("expected a non-negative integer"));
        }
        let n = self.rest()[..digits].parse().map_err(|_| self.error("integer out of range"))?;
        self.pos += digits;
        Ok(n)
    }

    fn real(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let sign_ok = (c == '+' || c == '-') && (i == 0 || matches!(rest.as_bytes()[i - 1], b'e' | b'E'));
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_ok {
                end = i + 1;
            } else {
                break;
            }
        }
        let value: f64 = rest[..end].parse().map_err(|_| self.error("expected a number"))?;
        if !value.is_finite() {
            return Err(self.error("number must be finite"));
        }
        self.pos += end;
        Ok(value)
    }

    fn set_literal(&mut self, var: Var) -> Result<ObjectSet, ParseError> {
        self.expect("{")?;
        let universe = match var {
            Var::Intent => self.db.n_attributes(),
            Var::Extent => self.db.n_objects(),
        };
        let mut set = ObjectSet::empty(universe);
        if self.eat("}") {
            return Ok(set);
        }
        loop {
            self.skip_ws();
            let position = self.pos;
            let name = self.name()?;
            set.insert(self.resolve(var, &name, position)?);
            if self.eat("}") {
                return Ok(set);
            }
            self.expect(",")?;
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let rest = self.rest();
        if let Some(body) = rest.strip_prefix('"') {
            let mut out = String::new();
            let mut chars = body.char_indices();
            while let Some((i, c)) = chars.next() {
                match c {
                    '"' => {
                        self.pos += i + 2;
                        return Ok(out);
                    }
                    '\\' => match chars.next() {
                        Some((_, escaped)) => out.push(escaped),
                        None => break,
                    },
                    c => out.push(c),
                }
            }
            return Err(self.error("unterminated quoted name"));
        }
        let end = rest.find(|c: char| c.is_whitespace() || is_reserved(c)).unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn resolve(&self, var: Var, name: &str, position: usize) -> Result<usize, ParseError> {
        let (own, other) = match var {
            Var::Intent => (self.db.attribute_id(name).map(|a| a.0), self.db.object_id(name).is_some()),
            Var::Extent => (self.db.object_id(name).map(|o| o.0), self.db.attribute_id(name).is_some()),
        };
        let (label, space, other_space) = match var {
            Var::Intent => ("A", "attribute", "object"),
            Var::Extent => ("O", "object", "attribute"),
        };
        if let Some(index) = own {
            return Ok(index);
        }
        if other {
            return Err(ParseError::VarMismatch {
                position,
                var: label,
                name: name.to_string(),
                found: other_space,
                expected: space,
            });
        }
        let pool = match var {
            Var::Intent => self.db.attribute_names(),
            Var::Extent => self.db.object_names(),
        };
        Err(ParseError::UnknownName { position, space, name: name.to_string(), suggestions: near_misses(name, pool) })
    }
}

fn is_reserved(c: char) -> bool {
    matches!(c, ',' | '{' | '}' | '(' | ')' | '"')
}

/// Up to three names within edit distance 2, closest first.
fn near_misses(name: &str, pool: &[String]) -> Vec<String> {
    let mut scored: Vec<(usize, &String)> = pool
        .iter()
        .map(|candidate| (strsim::levenshtein(name, candidate), candidate))
        .filter(|(d, _)| *d <= 2)
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, n)| n.clone()).collect()
}

fn write_name(out: &mut String, name: &str) {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || is_reserved(c) || c == '\\') {
        out.push('"');
        for c in name.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    } else {
        out.push_str(name);
    }
}

fn write_set<S: Space>(out: &mut String, set: &BitSet<S>, names: &[String]) {
    out.push('{');
    for (i, index) in set.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_name(out, &names[index]);
    }
    out.push('}');
}

/// Canonical text of a concept constraint. Re-parses to the same tree.
pub fn print_constraint(c: &ConceptConstraint, db: &BooleanDatabase) -> String {
    let mut out = String::new();
    write_constraint(&mut out, c, db);
    out
}

fn is_connective(c: &ConceptConstraint) -> bool {
    matches!(c, ConceptConstraint::And(_) | ConceptConstraint::Or(_))
}

fn write_constraint(out: &mut String, c: &ConceptConstraint, db: &BooleanDatabase) {
    let var = |v: Var| if v == Var::Intent { "A" } else { "O" };
    match c {
        ConceptConstraint::True => out.push_str("true"),
        ConceptConstraint::Not(inner) if **inner == ConceptConstraint::True => out.push_str("false"),
        ConceptConstraint::Not(inner) => {
            out.push_str("not (");
            write_constraint(out, inner, db);
            out.push(')');
        }
        ConceptConstraint::And(cs) | ConceptConstraint::Or(cs) => {
            if cs.is_empty() {
                out.push_str(if matches!(c, ConceptConstraint::And(_)) { "true" } else { "false" });
                return;
            }
            let sep = if matches!(c, ConceptConstraint::And(_)) { " and " } else { " or " };
            for (i, child) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                if is_connective(child) {
                    out.push('(');
                    write_constraint(out, child, db);
                    out.push(')');
                } else {
                    write_constraint(out, child, db);
                }
            }
        }
        ConceptConstraint::Freq { var: v, cmp, threshold } => {
            let _ = write!(out, "freq({}) {cmp} {threshold}", var(*v));
        }
        ConceptConstraint::Size { var: v, cmp, threshold } => {
            let _ = write!(out, "size({}) {cmp} {threshold}", var(*v));
        }
        ConceptConstraint::Set { rel, operand } => {
            let _ = write!(out, "{} {} ", var(operand.var()), rel.keyword());
            match operand {
                SetOperand::Intent(k) => write_set(out, k, db.attribute_names()),
                SetOperand::Extent(k) => write_set(out, k, db.object_names()),
            }
        }
        ConceptConstraint::Agg { agg, cmp, threshold } => {
            let _ = write!(out, "{agg}(A) {cmp} {threshold}");
        }
        ConceptConstraint::Area { cmp, threshold } => {
            let _ = write!(out, "area {cmp} {threshold}");
        }
    }
}

/// Text of a projected constraint, with object sets named from `db`.
///
/// Leaves read like concept constraints on the extent (`size(O)`,
/// `freq(O)` for the transposed frequency, `O subset {...}`), plus
/// `wfreq(O)` and `wavg(O)` for the weighted frequency and its average, and
/// `proj(...)` around a constraint evaluated on `(f(O), O)`.
pub fn print_projected(p: &ProjectedConstraint, db: &BooleanDatabase) -> String {
    let mut out = String::new();
    write_projected(&mut out, p, db, "O", db.object_names());
    out
}

/// Text of a dual projection: the same leaves ranging over attribute sets.
pub fn print_dual(dual: &cproj_core::DualProjection) -> String {
    let mut out = String::new();
    let t = dual.transposed();
    write_projected(&mut out, dual.constraint(), t, "A", t.object_names());
    out
}

fn write_projected(out: &mut String, p: &ProjectedConstraint, db: &BooleanDatabase, var: &str, names: &[String]) {
    use ProjectedConstraint as P;
    match p {
        P::True => out.push_str("true"),
        P::Not(inner) if **inner == P::True => out.push_str("false"),
        P::Not(inner) => {
            out.push_str("not (");
            write_projected(out, inner, db, var, names);
            out.push(')');
        }
        P::And(cs) | P::Or(cs) => {
            if cs.is_empty() {
                out.push_str(if matches!(p, P::And(_)) { "true" } else { "false" });
                return;
            }
            let sep = if matches!(p, P::And(_)) { " and " } else { " or " };
            for (i, child) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                if matches!(child, P::And(_) | P::Or(_)) {
                    out.push('(');
                    write_projected(out, child, db, var, names);
                    out.push(')');
                } else {
                    write_projected(out, child, db, var, names);
                }
            }
        }
        P::Size { cmp, threshold } => {
            let _ = write!(out, "size({var}) {cmp} {threshold}");
        }
        P::Freq { cmp, threshold } => {
            let _ = write!(out, "freq({var}) {cmp} {threshold}");
        }
        P::Contains(k) => {
            let _ = write!(out, "{var} superset ");
            write_set(out, k, names);
        }
        P::ContainedIn(k) => {
            let _ = write!(out, "{var} subset ");
            write_set(out, k, names);
        }
        P::WeightedFreq { cmp, threshold } => {
            let _ = write!(out, "wfreq({var}) {cmp} {threshold}");
        }
        P::WeightedAvg { cmp, threshold } => {
            let _ = write!(out, "wavg({var}) {cmp} {threshold}");
        }
        P::Area { cmp, threshold } => {
            let _ = write!(out, "area {cmp} {threshold}");
        }
        P::Definitional(c) => {
            out.push_str("proj(");
            write_constraint(out, c, db);
            out.push(')');
        }
    }
}
