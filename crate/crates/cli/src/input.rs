use std::path::Path;

use pyragas::model::{ProblemDocument, Region, Tolerances};

use crate::error::CliError;

/// Reads and schema-checks a problem document; nothing numerical happens here.
pub fn load_document(path: &Path) -> Result<ProblemDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    parse_document(&text).map_err(|(location, message)| CliError::Schema { path: path.to_path_buf(), location, message })
}

/// Returns the JSON path and message of the first schema violation.
pub fn parse_document(text: &str) -> Result<ProblemDocument, (String, String)> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ProblemDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| (e.path().to_string(), e.inner().to_string()))?;
    de.end().map_err(|e| (".".to_string(), e.to_string()))?;
    Ok(doc)
}

/// Command-line overrides of the document's tolerances and search region.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub region: Option<Vec<f64>>,
    pub tol_one: Option<f64>,
}

impl Overrides {
    pub fn tolerances(&self, doc: &ProblemDocument) -> Result<Tolerances, CliError> {
        let mut tol = doc.tolerances();
        if let Some(t) = self.tol_one {
            tol.tol_one = t;
        }
        tol.validate()?;
        Ok(tol)
    }

    pub fn region(&self, doc: &ProblemDocument) -> Result<Option<Region>, CliError> {
        match self.region.as_deref() {
            Some(&[re_min, re_max, im_max]) => Ok(Some(Region::new(re_min, re_max, im_max)?)),
            Some(_) => Err(CliError::Usage("--region takes RE_MIN RE_MAX IM_MAX".into())),
            None => Ok(doc.region),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_reports_its_path() {
        let text = r#"{"kind": "equilibrium", "dimension": 1, "field": {"expressions": ["x1"], "colour": 1},
                       "point": [0], "gain": [0], "delay": 1}"#;
        let (path, message) = parse_document(text).unwrap_err();
        assert_eq!(path, "field.colour");
        assert!(message.contains("colour"), "{message}");
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let text = r#"{"kind": "equilibrium", "dimension": 1, "field": {"expressions": ["x1"]}, "point": [0], "gain": [0], "delay": 1} x"#;
        assert!(parse_document(text).is_err());
    }
}
