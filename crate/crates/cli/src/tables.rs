//! The standard zig-zags of a node and the extension templates, computed
//! from live library calls and compared against checked-in golden files.

use serde::Serialize;

use conifold::zigzag::{
    assemble, mu_corrected, mu_ic, mu_j_star, mu_skyscraper, render_compressed, skyscraper_sum, ExtensionPresentation,
    ZigZag,
};
use conifold::{QMatrix, Q};

/// Number of nodes in the multi-node row.
pub const MULTI_NODE_ROW_R: usize = 3;

pub const GOLDEN_TABLE1: &str = include_str!("../golden/table1.json");
pub const GOLDEN_TABLE2: &str = include_str!("../golden/table2.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub object: String,
    pub compressed: String,
    pub tuple: ZigZag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<ExtensionPresentation>,
    pub comment: String,
}

fn row(object: &str, tuple: ZigZag, presentation: Option<ExtensionPresentation>, comment: &str) -> TableRow {
    TableRow {
        object: object.into(),
        compressed: render_compressed(tuple.data()),
        tuple,
        presentation,
        comment: comment.into(),
    }
}

pub fn table1() -> Vec<TableRow> {
    let sky = mu_skyscraper(1).expect("multiplicity 1");
    let (corrected, _) = mu_corrected(1).expect("one node");
    vec![
        row("IC", mu_ic(1, 1), None, "minimal extension"),
        row("skyscraper", sky, None, "point-supported rank-one object"),
        row("corrected", corrected, None, "unique corrected non-split class"),
        row(
            &format!("{MULTI_NODE_ROW_R}-fold skyscraper sum"),
            skyscraper_sum(MULTI_NODE_ROW_R),
            None,
            "multi-node local shadow",
        ),
    ]
}

/// The general row instantiates the block template with an endpoint whose
/// point term `B` is nonzero: the `j_*`-shape, glued to a skyscraper by
/// `u = 1` in the `beta` block (and `-1` in `gamma` to keep a complex).
pub fn general_extension() -> ExtensionPresentation {
    let one = |x: i64| QMatrix::from_rows(vec![vec![Q::from_integer(x.into())]]).expect("1x1");
    ExtensionPresentation::new(
        mu_j_star(),
        mu_skyscraper(1).expect("multiplicity 1"),
        [QMatrix::zeros(0, 0), one(1), one(-1)],
        vec![Q::from_integer(1.into())],
    )
    .expect("block relations hold")
}

fn assembled_row(object: &str, e: ExtensionPresentation, comment: &str) -> TableRow {
    let tuple = assemble(&e).expect("well formed").zigzag().expect("exact");
    row(object, tuple, Some(e), comment)
}

pub fn table2() -> Vec<TableRow> {
    let split = ExtensionPresentation::split(mu_ic(1, 1), mu_skyscraper(1).expect("multiplicity 1"));
    let (_, corrected) = mu_corrected(1).expect("one node");
    vec![
        assembled_row("split extension", split, "trivial extension class"),
        assembled_row(
            "general extension",
            general_extension(),
            "block template beta_E = [[beta, u], [0, 1]]; u records the class modulo Im beta",
        ),
        assembled_row("corrected non-split extension", corrected, "unique nontrivial self-dual class"),
    ]
}

pub fn canonical(rows: &[TableRow]) -> String {
    conifold::canonical_json(&rows).expect("rows serialize")
}

/// Compares generated rows with a golden file; names the first differing
/// row on mismatch.
pub fn compare_with_golden(rows: &[TableRow], golden: &str) -> Result<(), String> {
    let expected: serde_json::Value =
        serde_json::from_str(golden).map_err(|e| format!("golden file is not valid JSON: {e}"))?;
    let generated = serde_json::to_value(rows).expect("rows serialize");
    let (Some(exp), Some(gen)) = (expected.as_array(), generated.as_array()) else {
        return Err("golden file is not a list of rows".into());
    };
    for (i, g) in gen.iter().enumerate() {
        let name = g["object"].as_str().unwrap_or("?");
        match exp.get(i) {
            None => return Err(format!("row {} ({name}) missing from golden file", i + 1)),
            Some(e) if e != g => return Err(format!("row {} ({name}) differs from golden file", i + 1)),
            _ => {}
        }
    }
    if exp.len() != gen.len() {
        return Err(format!("golden file has {} rows, expected {}", exp.len(), gen.len()));
    }
    // byte-level: canonical serialization of the golden content must match too
    if canonical(rows) != conifold::canonical_json(&expected).expect("value serializes") {
        return Err("canonical serialization differs".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_render_like_the_tables() {
        let t1: Vec<String> = table1().into_iter().map(|r| r.compressed).collect();
        assert_eq!(
            t1,
            ["(Q_U[3], 0, 0, 0, 0, 0)", "(0, Q, Q, 0, id, 0)", "(Q_U[3], Q, Q, 0, id, 0)", "(0, Q^3, Q^3, 0, id_3, 0)"]
        );
        let t2 = table2();
        assert_eq!(t2[0].compressed, "(Q_U[3], Q, Q, 0, id, 0)");
        assert_eq!(t2[0].tuple, t2[2].tuple);
        assert_eq!(t2[1].tuple.dims(), [1, 1, 2, 1]);
    }

    #[test]
    fn generated_rows_match_golden_files() {
        compare_with_golden(&table1(), GOLDEN_TABLE1).unwrap();
        compare_with_golden(&table2(), GOLDEN_TABLE2).unwrap();
    }

    #[test]
    fn corrupted_golden_names_the_row() {
        let corrupted = GOLDEN_TABLE1.replace("minimal extension", "minimal extensio");
        let err = compare_with_golden(&table1(), &corrupted).unwrap_err();
        assert!(err.contains("row 1 (IC)"), "{err}");
    }
}
