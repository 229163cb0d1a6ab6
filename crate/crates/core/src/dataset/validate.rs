//! Annotation checks that parsing alone does not catch.

use std::fmt;

use serde::Serialize;

use crate::model::{subtype_of, Modality, Normalized};

use super::NtxDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IssueKind {
    SpanMismatch,
    UnknownSubType,
    MalformedValue,
    DuplicateModality,
    RangeOrder,
    MissingNote,
}

impl IssueKind {
    pub const ALL: [IssueKind; 6] = [
        IssueKind::SpanMismatch,
        IssueKind::UnknownSubType,
        IssueKind::MalformedValue,
        IssueKind::DuplicateModality,
        IssueKind::RangeOrder,
        IssueKind::MissingNote,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IssueKind::SpanMismatch => "SpanMismatch",
            IssueKind::UnknownSubType => "UnknownSubType",
            IssueKind::MalformedValue => "MalformedValue",
            IssueKind::DuplicateModality => "DuplicateModality",
            IssueKind::RangeOrder => "RangeOrder",
            IssueKind::MissingNote => "MissingNote",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub doc: usize,
    pub entity: usize,
    pub kind: IssueKind,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "doc {} entity {}: {}: {}", self.doc, self.entity, self.kind.name(), self.message)
    }
}

/// At most one issue of each kind per entity, in document order.
pub fn validate(docs: &[NtxDocument]) -> Vec<ValidationIssue> {
    let mut out = Vec::new();
    for (d, doc) in docs.iter().enumerate() {
        let chars: Vec<char> = doc.text.chars().collect();
        for (e, ent) in doc.entities.iter().enumerate() {
            let mut issue = |kind, message: String| out.push(ValidationIssue { doc: d, entity: e, kind, message });
            let surface: Option<String> = chars.get(ent.start..ent.start + ent.length).map(|s| s.iter().collect());
            if surface.as_deref() != Some(ent.text.as_str()) {
                issue(IssueKind::SpanMismatch, format!("span text {:?} != surface {:?}", surface.unwrap_or_default(), ent.text));
            }
            match subtype_of(&ent.sub_type) {
                Err(_) => issue(IssueKind::UnknownSubType, format!("unknown sub-type `{}`", ent.sub_type)),
                Ok(t) => {
                    if let Err(reason) = Normalized::parse_for(t, &ent.value) {
                        issue(IssueKind::MalformedValue, format!("`{}`: {reason}", ent.value));
                    }
                }
            }
            let rs = &ent.resolutions;
            let dual_ok = match rs.as_slice() {
                [] | [_] => true,
                [a, b] => {
                    let mut m = [a.modality, b.modality];
                    m.sort_by_key(|m| *m as u8);
                    m == [Modality::Past, Modality::Future]
                }
                _ => false,
            };
            if !dual_ok {
                issue(IssueKind::DuplicateModality, "more than one resolution per modality".into());
            }
            if rs.iter().any(|r| !r.is_ordered()) {
                issue(IssueKind::RangeOrder, "range begins after it ends".into());
            }
            if ent.not_supported && ent.note.as_deref().is_none_or(|n| n.trim().is_empty()) {
                issue(IssueKind::MissingNote, "notSupported entity without a note".into());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_dataset;
    use std::path::Path;

    fn issues(entity: &str) -> Vec<IssueKind> {
        let src = format!(r#"[{{"text": "Call me Friday", "lang": "en", "entities": [{entity}]}}]"#);
        validate(&parse_dataset(&src, Path::new("t")).unwrap()).into_iter().map(|i| i.kind).collect()
    }

    #[test]
    fn one_issue_per_fault() {
        let ok = r#"{"start": 8, "length": 6, "text": "Friday", "type": "date", "value": "XXXX-WXX-5"}"#;
        assert!(issues(ok).is_empty());
        assert_eq!(issues(&ok.replace("\"start\": 8", "\"start\": 7")), [IssueKind::SpanMismatch]);
        assert_eq!(issues(&ok.replace("\"date\"", "\"weekday\"")), [IssueKind::UnknownSubType]);
        assert_eq!(issues(&ok.replace("XXXX-WXX-5", "XXXX-WXX-8")), [IssueKind::MalformedValue]);
        let two_future = ok.replace(
            "}",
            r#", "resolutions": [{"timeline": "value", "value": "2022-07-01", "modality": "future"},
                                 {"timeline": "value", "value": "2022-07-08", "modality": "future"}]}"#,
        );
        assert_eq!(issues(&two_future), [IssueKind::DuplicateModality]);
        let reversed = ok.replace(
            "}",
            r#", "resolutions": [{"timeline": "range", "begin": "2022-07-08", "end": "2022-07-01"}]}"#,
        );
        assert_eq!(issues(&reversed), [IssueKind::RangeOrder]);
        assert_eq!(issues(&ok.replace("}", r#", "notSupported": true}"#)), [IssueKind::MissingNote]);
        assert!(issues(&ok.replace("}", r#", "notSupported": true, "note": "weekday ranges"}"#)).is_empty());
    }
}
