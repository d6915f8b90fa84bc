//! Plain-text transaction files: one transaction per line, items as
//! whitespace-separated 0-based indices. An empty line is an empty
//! transaction.

use std::fmt::Write as _;
use std::path::Path;

use fcagraph_core::TransactionDatabase;

use crate::error::{io_error, Error, Result};

/// Parses a transaction file. The item universe is `{0..u}` where `u` is the
/// larger of the transaction count and one past the largest item, so a
/// k-NN database reads back with its original universe.
pub fn parse_transactions(text: &str) -> Result<TransactionDatabase> {
    let mut lists = Vec::new();
    let mut universe = 0;
    for (line_no, line) in text.lines().enumerate() {
        let mut items: Vec<usize> = Vec::new();
        for token in line.split_whitespace() {
            let item: usize = token.parse().map_err(|_| Error::BadItem {
                line: line_no + 1,
                token: token.to_string(),
            })?;
            if items.contains(&item) {
                return Err(Error::RepeatedItem {
                    line: line_no + 1,
                    item,
                });
            }
            universe = universe.max(item + 1);
            items.push(item);
        }
        lists.push(items);
    }
    let universe = universe.max(lists.len());
    Ok(TransactionDatabase::from_transactions(universe, &lists)?)
}

pub fn format_transactions(db: &TransactionDatabase) -> String {
    let mut out = String::new();
    for row in db.rows() {
        for (pos, item) in row.iter().enumerate() {
            if pos > 0 {
                out.push(' ');
            }
            write!(out, "{item}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn read_transactions(path: impl AsRef<Path>) -> Result<TransactionDatabase> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    parse_transactions(&text)
}

pub fn write_transactions(db: &TransactionDatabase, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_transactions(db)).map_err(io_error(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let db = parse_transactions("1 2\n0 2\n0  1 2\n").unwrap();
        assert_eq!(db.len(), 3);
        assert_eq!(db.num_items(), 3);
        assert_eq!(db.to_lists(), vec![vec![1, 2], vec![0, 2], vec![0, 1, 2]]);
        assert_eq!(format_transactions(&db), "1 2\n0 2\n0 1 2\n");
    }

    #[test]
    fn empty_transaction_line() {
        let db = parse_transactions("0\n\n1\n").unwrap();
        assert_eq!(db.to_lists(), vec![vec![0], vec![], vec![1]]);
        assert_eq!(format_transactions(&db), "0\n\n1\n");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            parse_transactions("0 1\n2 x\n"),
            Err(Error::BadItem { line: 2, .. })
        ));
        assert!(matches!(
            parse_transactions("3 1 3\n"),
            Err(Error::RepeatedItem { line: 1, item: 3 })
        ));
    }

    #[test]
    fn universe_grows_to_largest_item() {
        let db = parse_transactions("7\n0\n").unwrap();
        assert_eq!(db.num_items(), 8);
    }
}
