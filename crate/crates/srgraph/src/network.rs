//! Reaction-network text format and the stoichiometric matrix.
//!
//! One reaction per line: `<side> <arrow> <side>` with arrows `<->` or `->`
//! (treated identically — all analyses here are invariant under swapping a
//! reaction's sides), sides are `+`-separated terms `coef? name`, `#` starts
//! a comment. Coefficients are positive integers or `p/q` fractions and
//! default to 1; duplicate species on one side merge by summing.
//!
//! Example:
//!
//! ```text
//! # reversible dimerization
//! 2 A <-> B
//! B + C -> D
//! ```

use num_traits::Zero;
use std::collections::BTreeMap;
use std::collections::HashMap;
use thiserror::Error;

use crate::matrix::StoichMatrix;
use crate::rational::{parse_rational, rational_to_string, Rational, Sign};

/// A named species; `index` is its 0-based first-appearance position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// One reaction line. Sides map species index to a positive coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub left: BTreeMap<usize, Rational>,
    pub right: BTreeMap<usize, Rational>,
    pub index: usize,
}

/// An ordered reaction network: species by first appearance, reactions by
/// line. Immutable after parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
}

/// A species occurring on both sides of a single reaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct N1cViolation {
    pub species: usize,
    pub reaction: usize,
}

/// Refusal to build a stoichiometric matrix for a network with one-step
/// catalysis; carries every violating (species, reaction) pair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} species occur on both sides of a reaction", .violations.len())]
pub struct N1cError {
    pub violations: Vec<N1cViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct NetworkParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ReactionNetwork {
    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    /// Parses the reaction text format. Species are indexed by first
    /// appearance, reactions by line order.
    pub fn parse(text: &str) -> Result<ReactionNetwork, NetworkParseError> {
        let mut species: Vec<Species> = Vec::new();
        let mut by_name: HashMap<String, usize> = HashMap::new();
        let mut reactions: Vec<Reaction> = Vec::new();
        for (line_idx, raw_line) in text.lines().enumerate() {
            let line_no = line_idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let tokens = tokenize(line, line_no)?;
            let reaction = parse_reaction(
                &tokens,
                line_no,
                line.chars().count() + 1,
                reactions.len(),
                &mut species,
                &mut by_name,
            )?;
            reactions.push(reaction);
        }
        if reactions.is_empty() {
            return Err(NetworkParseError {
                line: 1,
                column: 1,
                message: "no reactions found".to_string(),
            });
        }
        Ok(ReactionNetwork { species, reactions })
    }

    /// Canonical text form; reparsing reproduces the network exactly.
    pub fn to_text(&self) -> String {
        let side_text = |side: &BTreeMap<usize, Rational>| {
            side.iter()
                .map(|(&idx, coef)| {
                    let name = &self.species[idx].name;
                    if coef == &Rational::from_integer(1.into()) {
                        name.clone()
                    } else {
                        format!("{} {}", rational_to_string(coef), name)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let mut out = String::new();
        for reaction in &self.reactions {
            out.push_str(&side_text(&reaction.left));
            out.push_str(" <-> ");
            out.push_str(&side_text(&reaction.right));
            // Trailing spaces from an empty side are harmless to the parser
            // but ugly; trim the line.
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out
    }

    /// Every (species, reaction) pair where the species occurs on both
    /// sides. Violations are data, not errors; only the stoichiometric
    /// matrix construction refuses them.
    pub fn validate_n1c(&self) -> Vec<N1cViolation> {
        let mut violations = Vec::new();
        for reaction in &self.reactions {
            for &species in reaction.left.keys() {
                if reaction.right.contains_key(&species) {
                    violations.push(N1cViolation {
                        species,
                        reaction: reaction.index,
                    });
                }
            }
        }
        violations
    }

    /// The n×m matrix with entry (i, j) = coefficient of species i on the
    /// right of reaction j minus its coefficient on the left. Refuses
    /// networks with one-step catalysis, where the matrix would not
    /// determine participation sides.
    pub fn stoichiometric_matrix(&self) -> Result<StoichMatrix, N1cError> {
        let violations = self.validate_n1c();
        if !violations.is_empty() {
            return Err(N1cError { violations });
        }
        let mut matrix = StoichMatrix::zero(self.species.len(), self.reactions.len())
            .expect("parsed networks are nonempty");
        for reaction in &self.reactions {
            for (&species, coef) in &reaction.right {
                matrix.set(species, reaction.index, coef.clone());
            }
            for (&species, coef) in &reaction.left {
                matrix.set(species, reaction.index, -coef.clone());
            }
        }
        Ok(matrix)
    }
}

/// Re-signing helper mirroring [`StoichMatrix::resign_columns`], exposed
/// here because swapping a reaction's sides is exactly a column re-signing.
pub fn resign_columns(
    matrix: &StoichMatrix,
    signs: &[Sign],
) -> Result<StoichMatrix, crate::matrix::MatrixError> {
    matrix.resign_columns(signs)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Coefficient(Rational),
    Name(String),
    Plus,
    Arrow,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Token, usize)>, NetworkParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let column = i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            tokens.push((Token::Plus, column));
            i += 1;
        } else if c == '<' {
            if chars[i..].starts_with(&['<', '-', '>']) {
                tokens.push((Token::Arrow, column));
                i += 3;
            } else {
                return Err(NetworkParseError {
                    line: line_no,
                    column,
                    message: "expected `<->`".to_string(),
                });
            }
        } else if c == '-' {
            if chars[i..].starts_with(&['-', '>']) {
                tokens.push((Token::Arrow, column));
                i += 2;
            } else {
                return Err(NetworkParseError {
                    line: line_no,
                    column,
                    message: "expected `->`".to_string(),
                });
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let token: String = chars[start..i].iter().collect();
            let value = parse_rational(&token).map_err(|e| NetworkParseError {
                line: line_no,
                column,
                message: e.to_string(),
            })?;
            if value <= Rational::zero() {
                return Err(NetworkParseError {
                    line: line_no,
                    column,
                    message: format!("coefficient must be positive, got `{token}`"),
                });
            }
            tokens.push((Token::Coefficient(value), column));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
            {
                i += 1;
            }
            tokens.push((Token::Name(chars[start..i].iter().collect()), column));
        } else {
            return Err(NetworkParseError {
                line: line_no,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(tokens)
}

fn parse_reaction(
    tokens: &[(Token, usize)],
    line_no: usize,
    end_column: usize,
    reaction_index: usize,
    species: &mut Vec<Species>,
    by_name: &mut HashMap<String, usize>,
) -> Result<Reaction, NetworkParseError> {
    let err = |column: usize, message: String| NetworkParseError {
        line: line_no,
        column,
        message,
    };
    let mut intern = |name: &str| -> usize {
        if let Some(&idx) = by_name.get(name) {
            return idx;
        }
        let idx = species.len();
        species.push(Species {
            name: name.to_string(),
            index: idx,
        });
        by_name.insert(name.to_string(), idx);
        idx
    };

    // side := empty | term (+ term)* ; term := coef? name
    let mut pos = 0;
    let mut parse_side = |pos: &mut usize,
                          side: &mut BTreeMap<usize, Rational>|
     -> Result<(), NetworkParseError> {
        loop {
            let coef = match tokens.get(*pos) {
                Some((Token::Coefficient(c), _)) => {
                    *pos += 1;
                    Some(c.clone())
                }
                _ => None,
            };
            match tokens.get(*pos) {
                Some((Token::Name(name), _)) => {
                    *pos += 1;
                    let idx = intern(name);
                    let coef = coef.unwrap_or_else(|| Rational::from_integer(1.into()));
                    *side.entry(idx).or_insert_with(Rational::zero) += coef;
                }
                Some((token, column)) => {
                    if coef.is_some() {
                        return Err(err(*column, "expected species name".to_string()));
                    }
                    // An empty side: immediately an arrow or end.
                    if side.is_empty() && matches!(token, Token::Arrow) {
                        return Ok(());
                    }
                    return Err(err(*column, "expected species term".to_string()));
                }
                None => {
                    if coef.is_some() {
                        return Err(err(end_column, "expected species name".to_string()));
                    }
                    return Ok(());
                }
            }
            match tokens.get(*pos) {
                Some((Token::Plus, _)) => *pos += 1,
                _ => return Ok(()),
            }
        }
    };

    let mut left = BTreeMap::new();
    parse_side(&mut pos, &mut left)?;
    match tokens.get(pos) {
        Some((Token::Arrow, _)) => pos += 1,
        Some((_, column)) => return Err(err(*column, "expected `<->` or `->`".to_string())),
        None => return Err(err(end_column, "expected `<->` or `->`".to_string())),
    }
    let mut right = BTreeMap::new();
    parse_side(&mut pos, &mut right)?;
    if let Some((_, column)) = tokens.get(pos) {
        return Err(err(*column, "unexpected trailing input".to_string()));
    }
    if left.is_empty() && right.is_empty() {
        return Err(err(1, "reaction has no species on either side".to_string()));
    }
    Ok(Reaction {
        left,
        right,
        index: reaction_index,
    })
}
