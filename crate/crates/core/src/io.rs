//! The list-assignment file: `{"shape":[...],"universe":U,"lists":[[...],...]}`
//! with vertices in canonical order (largest parts first).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::colorset::MAX_COLORS;
use crate::error::{Error, Result};
use crate::graph::{Graph, ListAssignment, PartitionShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub shape: Vec<usize>,
    pub universe: usize,
    pub lists: ListAssignment,
}

impl InstanceFile {
    /// Wraps an instance; the universe is one past the largest color used.
    pub fn new(g: &Graph, lists: &ListAssignment) -> Self {
        let universe = lists.union().max().map_or(0, |c| c as usize + 1);
        InstanceFile {
            shape: g.shape().sizes().to_vec(),
            universe,
            lists: lists.clone(),
        }
    }

    /// Validates the document and builds the graph.
    pub fn instance(&self) -> Result<(Graph, ListAssignment)> {
        let shape = PartitionShape::new(self.shape.clone())?;
        if shape.sizes() != self.shape.as_slice() {
            return Err(Error::InvalidShape(format!(
                "shape {:?} must list part sizes in non-increasing order",
                self.shape
            )));
        }
        if self.universe > MAX_COLORS {
            return Err(Error::InvalidLists(format!("universe {} exceeds {MAX_COLORS}", self.universe)));
        }
        let g = Graph::new(shape);
        self.lists.check_against(&g)?;
        if let Some(c) = self.lists.union().max().filter(|&c| c as usize >= self.universe) {
            return Err(Error::InvalidLists(format!("color {c} outside universe 0..{}", self.universe)));
        }
        Ok((g, self.lists.clone()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAD33: &str = r#"{"shape":[3,3],"universe":3,"lists":[[0,1],[0,2],[1,2],[0,1],[0,2],[1,2]]}"#;

    #[test]
    fn parse_and_round_trip() {
        let f = InstanceFile::parse(BAD33).unwrap();
        let (g, l) = f.instance().unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(InstanceFile::new(&g, &l), f);
        assert_eq!(f.to_json(), BAD33);
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"{"shape":[2,3],"universe":3,"lists":[[0],[0],[1],[1],[1]]}"#,
            r#"{"shape":[1,1],"universe":1,"lists":[[0],[1]]}"#,
            r#"{"shape":[1,1],"universe":2,"lists":[[0]]}"#,
            r#"{"shape":[1],"universe":2,"lists":[[0]],"extra":1}"#,
            r#"{"shape":[0],"universe":2,"lists":[]}"#,
            "not json",
        ];
        for c in cases {
            let r = InstanceFile::parse(c).and_then(|f| f.instance().map(|_| ()));
            assert!(r.is_err(), "{c}");
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.json");
        let f = InstanceFile::parse(BAD33).unwrap();
        f.write(&path).unwrap();
        assert_eq!(InstanceFile::read(&path).unwrap(), f);
    }
}
