use std::sync::Mutex;

use super::{Oracle, OracleError, OracleQuery};
use crate::derive::{GoldSplit, GoldStep};
use crate::prompt::PromptKind;

/// Answers queries with a fixed script of gold labels, in order.
///
/// Built for one parse; the script mirrors exactly the queries an engine
/// issues for the same options, so forced moves are left out when they are
/// skipped.
#[derive(Debug)]
pub struct ReplayOracle {
    script: Vec<(PromptKind, String)>,
    cursor: Mutex<usize>,
}

impl ReplayOracle {
    pub fn new(script: Vec<(PromptKind, String)>) -> Self {
        ReplayOracle {
            script,
            cursor: Mutex::new(0),
        }
    }

    /// Script for the shift-reduce engine replaying `steps`.
    pub fn bottom_up(steps: &[GoldStep], skip_forced: bool) -> Self {
        let mut queue = steps.iter().filter(|s| **s == GoldStep::Shift).count();
        let mut stack = 0usize;
        let mut script = Vec::new();
        for step in steps {
            let can_shift = queue > 0;
            let can_reduce = stack >= 2;
            let forced = can_shift != can_reduce;
            match step {
                GoldStep::Shift => {
                    if !(forced && skip_forced) {
                        script.push((PromptKind::Action, "shift".to_string()));
                    }
                    queue -= 1;
                    stack += 1;
                }
                GoldStep::Reduce {
                    nuclearity,
                    relation,
                } => {
                    if !(forced && skip_forced) {
                        script.push((PromptKind::Action, "reduce".to_string()));
                    }
                    script.push((PromptKind::Nuclearity, nuclearity.as_str().to_string()));
                    script.push((PromptKind::Relation, relation.to_string()));
                    stack -= 1;
                }
            }
        }
        ReplayOracle::new(script)
    }

    /// Script for the span-split engine replaying pre-order `splits`.
    pub fn top_down(splits: &[GoldSplit], skip_forced: bool) -> Self {
        let mut script = Vec::new();
        for s in splits {
            if !(s.span.len() == 2 && skip_forced) {
                script.push((PromptKind::Split, s.k.to_string()));
            }
            script.push((PromptKind::Nuclearity, s.nuclearity.as_str().to_string()));
            script.push((PromptKind::Relation, s.relation.to_string()));
        }
        ReplayOracle::new(script)
    }

    pub fn remaining(&self) -> usize {
        self.script.len() - *self.cursor.lock().expect("replay cursor poisoned")
    }

    pub fn script(&self) -> &[(PromptKind, String)] {
        &self.script
    }
}

impl Oracle for ReplayOracle {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        let mut cursor = self.cursor.lock().expect("replay cursor poisoned");
        let (kind, answer) = self
            .script
            .get(*cursor)
            .ok_or(OracleError::ReplayExhausted(*cursor))?;
        if *kind != query.kind {
            return Err(OracleError::KindMismatch {
                position: *cursor,
                expected: *kind,
                found: query.kind,
            });
        }
        *cursor += 1;
        Ok(answer.clone())
    }

    fn fingerprint(&self) -> String {
        "replay".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Nuclearity, Relation};

    fn q(kind: PromptKind) -> OracleQuery {
        OracleQuery::new(kind, String::new(), vec!["x".into()])
    }

    #[test]
    fn exhaustion_and_mismatch() {
        let o = ReplayOracle::new(vec![(PromptKind::Action, "shift".into())]);
        assert!(matches!(
            o.complete(&q(PromptKind::Split)),
            Err(OracleError::KindMismatch { position: 0, .. })
        ));
        assert_eq!(o.complete(&q(PromptKind::Action)).unwrap(), "shift");
        assert!(matches!(
            o.complete(&q(PromptKind::Action)),
            Err(OracleError::ReplayExhausted(1))
        ));
    }

    #[test]
    fn forced_moves_are_left_out() {
        let reduce = GoldStep::Reduce {
            nuclearity: Nuclearity::NucleusSatellite,
            relation: Relation::new("Elaboration"),
        };
        let steps = vec![GoldStep::Shift, GoldStep::Shift, reduce];
        // first shift and final reduce are forced
        let skipping = ReplayOracle::bottom_up(&steps, true);
        let kinds: Vec<_> = skipping.script().iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds, vec![PromptKind::Nuclearity, PromptKind::Relation]);
        // second shift: stack=1 so reduce is illegal -> forced too
        let strict = ReplayOracle::bottom_up(&steps, false);
        assert_eq!(strict.script().len(), 5);
    }
}
