//! Plain tabular output shared by the checks.

/// A header plus string rows, ready to be written as CSV.
///
/// Numbers are rendered with Rust's shortest round-trip formatting, so equal
/// values always print identically.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Appends the rows of a table with the same header.
    pub fn extend(&mut self, other: Table) {
        debug_assert_eq!(self.header, other.header);
        self.rows.extend(other.rows);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}
