//! Decision matrix generation: turn an adequate set into a strategy.
//!
//! Every member of the set is a configuration the team is willing to lose.
//! Each player marks their own color in that member as bad at the S-code
//! they would observe. A cell with one bad color guesses the other one, a
//! cell with no bad color passes, and a cell with both colors bad is a Star.

use serde::{Deserialize, Serialize};

use crate::adequacy;
use crate::error::{Error, Result};
use crate::model::{color_of, s_code, Action, AdequateSet, DecisionMatrix};

/// Matrix built from a set that may or may not be adequate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedMatrix {
    pub matrix: DecisionMatrix,
    /// `false` means the matrix guesses wrong on some configuration outside
    /// the set.
    pub adequate: bool,
}

/// Builds the matrix of an adequate set. Non-adequate input is rejected; use
/// [`build_decision_matrix_unchecked`] to experiment with one.
pub fn build_decision_matrix(set: &AdequateSet) -> Result<DecisionMatrix> {
    let generated = build_decision_matrix_unchecked(set)?;
    if !generated.adequate {
        return Err(Error::NotAdequate(set.to_csv_string()));
    }
    Ok(generated.matrix)
}

pub fn build_decision_matrix_unchecked(set: &AdequateSet) -> Result<GeneratedMatrix> {
    let n = set.n_players();
    let width = 1usize << (n - 1);
    // bad[i][s]: bit c set when color c is bad for player i+1 at S-code s.
    let mut bad = vec![vec![0u8; width]; n];
    for &m in set.members() {
        for player in 1..=n {
            let s = s_code(m, n, player) as usize;
            bad[player - 1][s] |= 1 << color_of(m, n, player);
        }
    }
    let rows = bad
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|b| match b {
                    0 => Action::Pass,
                    1 => Action::Guess1,
                    2 => Action::Guess0,
                    _ => Action::Star,
                })
                .collect()
        })
        .collect();
    Ok(GeneratedMatrix {
        matrix: DecisionMatrix::from_rows(rows)?,
        adequate: adequacy::is_adequate(set),
    })
}

/// Symbol used for Star cells in text output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StarStyle {
    #[default]
    Ascii,
    Unicode,
}

impl StarStyle {
    fn symbol(self) -> &'static str {
        match self {
            StarStyle::Ascii => "*",
            StarStyle::Unicode => "⋆",
        }
    }
}

fn cell_text(action: Action, style: StarStyle) -> &'static str {
    match action {
        Action::Star => style.symbol(),
        Action::Pass => " ",
        other => other.symbol(),
    }
}

/// One line per player, one character per S-code, cells separated by a
/// space. Pass cells are blank.
pub fn render_matrix(m: &DecisionMatrix, style: StarStyle) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<&str> = row.iter().map(|a| cell_text(*a, style)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Same grid with a header of S-codes and a player label on each row.
pub fn render_matrix_labeled(m: &DecisionMatrix, style: StarStyle) -> String {
    let col_width = (m.width() - 1).to_string().len().max(1);
    let label_width = format!("P{}", m.n_players()).len();
    let mut out = format!("{:label_width$} |", "");
    for s in 0..m.width() {
        out.push_str(&format!(" {s:>col_width$}"));
    }
    out.push('\n');
    for (i, row) in m.rows().iter().enumerate() {
        out.push_str(&format!("{:<label_width$} |", format!("P{}", i + 1)));
        for a in row {
            out.push_str(&format!(" {:>col_width$}", cell_text(*a, style)));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    players: usize,
    rows: Vec<Vec<String>>,
}

/// `{"players":N,"rows":[["1","","*",...],...]}`.
pub fn matrix_to_json(m: &DecisionMatrix) -> String {
    let doc = MatrixJson {
        players: m.n_players(),
        rows: m
            .rows()
            .iter()
            .map(|row| row.iter().map(|a| a.symbol().to_string()).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<DecisionMatrix> {
    let doc: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        input: "matrix JSON".into(),
        reason: e.to_string(),
    })?;
    if doc.rows.len() != doc.players {
        return Err(Error::MatrixSchema {
            row: doc.rows.len().min(doc.players) + 1,
            column: 1,
            reason: format!("expected {} rows, found {}", doc.players, doc.rows.len()),
        });
    }
    let mut rows = Vec::with_capacity(doc.rows.len());
    for (i, row) in doc.rows.iter().enumerate() {
        let mut parsed = Vec::with_capacity(row.len());
        for (j, cell) in row.iter().enumerate() {
            let action = Action::from_symbol(cell).ok_or_else(|| Error::MatrixSchema {
                row: i + 1,
                column: j + 1,
                reason: format!("unknown cell '{cell}', expected \"0\", \"1\", \"\" or \"*\""),
            })?;
            parsed.push(action);
        }
        rows.push(parsed);
    }
    DecisionMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, m: &[u32]) -> AdequateSet {
        AdequateSet::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn two_player_example() {
        let m = build_decision_matrix(&set(2, &[0, 3])).unwrap();
        assert_eq!(m.row(1), &[Action::Guess1, Action::Guess0]);
        assert_eq!(m.row(2), &[Action::Guess1, Action::Guess0]);
        assert_eq!(render_matrix(&m, StarStyle::Ascii), "1 0\n1 0\n");
    }

    #[test]
    fn row_equalities_of_the_two_optima() {
        let a = build_decision_matrix(&set(5, &[0, 7, 11, 19, 28, 29, 30])).unwrap();
        assert!(a.row(1) == a.row(2) && a.row(2) == a.row(3));
        assert_eq!(a.row(4), a.row(5));
        assert_ne!(a.row(3), a.row(4));
        let b = build_decision_matrix(&set(5, &[1, 6, 14, 22, 24, 27, 29])).unwrap();
        assert_eq!(b.row(1), b.row(2));
        assert_eq!(b.row(3), b.row(4));
        for i in 1..=4 {
            assert_ne!(b.row(i), b.row(5));
        }
        assert_ne!(b.row(2), b.row(3));
    }

    #[test]
    fn stars_come_from_double_bad_cells() {
        let m = build_decision_matrix(&set(5, &[0, 7, 11, 19, 28, 29, 30])).unwrap();
        let stars = m.star_positions();
        assert_eq!(stars.len(), 2);
        // 28 = 11100 and 29 = 11101 differ only in player 5.
        assert!(stars.contains(&(5, 14)));
        let text = render_matrix(&m, StarStyle::Unicode);
        assert_eq!(text.matches('⋆').count(), 2);
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn non_adequate_sets_are_flagged() {
        let s = set(2, &[0]);
        assert!(build_decision_matrix(&s).is_err());
        let g = build_decision_matrix_unchecked(&s).unwrap();
        assert!(!g.adequate);
        assert_eq!(g.matrix.row(1), &[Action::Guess1, Action::Pass]);
    }

    #[test]
    fn all_pass_render_is_blank() {
        let m = DecisionMatrix::filled(5, Action::Pass).unwrap();
        let text = render_matrix(&m, StarStyle::Ascii);
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().all(|l| l.len() == 31 && l.trim().is_empty()));
    }

    #[test]
    fn labeled_render_has_header() {
        let m = build_decision_matrix(&set(2, &[0, 3])).unwrap();
        assert_eq!(render_matrix_labeled(&m, StarStyle::Ascii), "   | 0 1\nP1 | 1 0\nP2 | 1 0\n");
    }

    #[test]
    fn json_round_trip() {
        let m = build_decision_matrix(&set(5, &[1, 6, 14, 22, 24, 27, 29])).unwrap();
        let text = matrix_to_json(&m);
        assert!(text.starts_with("{\"players\":5,\"rows\":[["));
        assert_eq!(matrix_from_json(&text).unwrap(), m);
    }

    #[test]
    fn json_schema_errors_name_the_cell() {
        let err = matrix_from_json(r#"{"players":2,"rows":[["1","0"],["1","x"]]}"#).unwrap_err();
        assert_eq!(
            err,
            Error::MatrixSchema {
                row: 2,
                column: 2,
                reason: "unknown cell 'x', expected \"0\", \"1\", \"\" or \"*\"".into()
            }
        );
        let err = matrix_from_json(r#"{"players":2,"rows":[["1","0"],["1"]]}"#).unwrap_err();
        assert!(matches!(err, Error::MatrixSchema { row: 2, .. }));
        let err = matrix_from_json(r#"{"players":3,"rows":[["1","0"]]}"#).unwrap_err();
        assert!(matches!(err, Error::MatrixSchema { row: 2, .. }));
        assert!(matches!(matrix_from_json("nope"), Err(Error::Parse { .. })));
    }
}
