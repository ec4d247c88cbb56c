//! Merging aspect mentions that refer to the same product aspect.
//!
//! Two surfaces join the same group when the dictionary maps them to the same
//! canonical term or when they share a head word ("battery" heads "battery
//! life"). Head words that differ only by a trailing "s" are merged when both
//! forms occur in the input ("photo"/"photos").

use std::collections::{BTreeMap, BTreeSet};

use crate::lexicons::AspectDictionary;
use crate::patterns::AspectOpinionPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeadRule {
    /// First word of a multi-word surface.
    #[default]
    First,
    /// Last word of a multi-word surface.
    Last,
}

impl HeadRule {
    fn head(self, surface: &str) -> &str {
        let mut words = surface.split_whitespace();
        let head = match self {
            HeadRule::First => words.next(),
            HeadRule::Last => words.next_back(),
        };
        head.unwrap_or(surface)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectGroup {
    pub canonical_label: String,
    pub members: BTreeSet<String>,
    /// Indices into the pair list the group was built from.
    pub pairs: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index wins so roots do not depend on union order
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn group_aspects(pairs: &[AspectOpinionPair], dict: &AspectDictionary) -> Vec<AspectGroup> {
    group_aspects_with(pairs, dict, HeadRule::First)
}

/// Groups are returned sorted by label.
pub fn group_aspects_with(
    pairs: &[AspectOpinionPair],
    dict: &AspectDictionary,
    rule: HeadRule,
) -> Vec<AspectGroup> {
    let surfaces: Vec<String> = pairs
        .iter()
        .map(|p| p.aspect_surface.to_lowercase())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if surfaces.is_empty() {
        return Vec::new();
    }

    let canonical: Vec<Option<String>> = surfaces
        .iter()
        .map(|s| dict.lookup(s).map(str::to_string))
        .collect();

    // Each surface is keyed by its own head and by the head of its canonical term.
    let raw_keys: Vec<BTreeSet<&str>> = surfaces
        .iter()
        .zip(&canonical)
        .map(|(s, c)| {
            let mut keys = BTreeSet::from([rule.head(s)]);
            if let Some(c) = c {
                keys.insert(rule.head(c));
            }
            keys
        })
        .collect();
    let all_keys: BTreeSet<&str> = raw_keys.iter().flatten().copied().collect();
    let fold = |k: &str| -> String {
        match k.strip_suffix('s') {
            Some(stem) if !stem.is_empty() && all_keys.contains(stem) => stem.to_string(),
            _ => k.to_string(),
        }
    };

    let mut uf = UnionFind::new(surfaces.len());
    let mut owner: BTreeMap<String, usize> = BTreeMap::new();
    for (i, keys) in raw_keys.iter().enumerate() {
        let mut keys: BTreeSet<String> = keys.iter().map(|k| fold(k)).collect();
        if let Some(c) = &canonical[i] {
            keys.insert(format!("\u{0}{c}"));
        }
        for key in keys {
            match owner.get(&key) {
                Some(&j) => uf.union(i, j),
                None => {
                    owner.insert(key, i);
                }
            }
        }
    }

    let mut members: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..surfaces.len() {
        members.entry(uf.find(i)).or_default().insert(i);
    }

    let mut groups: Vec<AspectGroup> = members
        .into_values()
        .map(|idx| {
            let names: BTreeSet<String> = idx.iter().map(|&i| surfaces[i].clone()).collect();
            let label = idx
                .iter()
                .filter_map(|&i| canonical[i].as_deref())
                .min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)))
                .or_else(|| {
                    names
                        .iter()
                        .map(String::as_str)
                        .min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)))
                })
                .unwrap_or_default()
                .to_string();
            let pair_idx = pairs
                .iter()
                .enumerate()
                .filter(|(_, p)| names.contains(&p.aspect_surface.to_lowercase()))
                .map(|(i, _)| i)
                .collect();
            AspectGroup {
                canonical_label: label,
                members: names,
                pairs: pair_idx,
            }
        })
        .collect();
    groups.sort_by(|a, b| {
        a.canonical_label
            .cmp(&b.canonical_label)
            .then(a.members.cmp(&b.members))
    });
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicons::Orientation;
    use crate::tagger::SentenceId;

    pub(crate) fn pair(surface: &str) -> AspectOpinionPair {
        AspectOpinionPair {
            aspect_surface: surface.to_string(),
            aspect_text: surface.to_string(),
            opinion_surface: "good".into(),
            orientation: Orientation::Positive,
            sentence: SentenceId(0),
            aspect_index: 0,
            aspect_span: (0, 1),
            opinion_index: 1,
            pattern_name: "t".into(),
        }
    }

    fn labels(groups: &[AspectGroup]) -> Vec<(&str, Vec<&str>)> {
        groups
            .iter()
            .map(|g| {
                (
                    g.canonical_label.as_str(),
                    g.members.iter().map(String::as_str).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn shared_head_word() {
        let pairs: Vec<_> = ["battery life", "battery", "battery usage", "battery power"]
            .into_iter()
            .map(pair)
            .collect();
        let groups = group_aspects(&pairs, &AspectDictionary::default());
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].canonical_label, "battery");
        assert_eq!(groups[0].pairs, vec![0, 1, 2, 3]);
    }

    #[test]
    fn synonym_rule() {
        let dict = AspectDictionary::parse("memory\n", "memory: capacity").unwrap();
        let pairs = vec![pair("capacity"), pair("memory")];
        let groups = group_aspects(&pairs, &dict);
        assert_eq!(
            labels(&groups),
            vec![("memory", vec!["capacity", "memory"])]
        );
    }

    #[test]
    fn unrelated_aspects_stay_apart() {
        let pairs = vec![pair("zoom"), pair("screen")];
        let groups = group_aspects(&pairs, &AspectDictionary::default());
        assert_eq!(
            labels(&groups),
            vec![("screen", vec!["screen"]), ("zoom", vec!["zoom"])]
        );
    }

    #[test]
    fn head_rule_last() {
        let pairs = vec![pair("battery life"), pair("life"), pair("battery")];
        let groups = group_aspects_with(&pairs, &AspectDictionary::default(), HeadRule::Last);
        assert_eq!(
            labels(&groups),
            vec![
                ("battery", vec!["battery"]),
                ("life", vec!["battery life", "life"])
            ]
        );
    }

    #[test]
    fn plural_heads_merge_only_when_both_present() {
        let pairs = vec![pair("photos"), pair("photo quality")];
        let groups = group_aspects(&pairs, &AspectDictionary::default());
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].canonical_label, "photos");

        let pairs = vec![pair("photos"), pair("lens")];
        assert_eq!(group_aspects(&pairs, &AspectDictionary::default()).len(), 2);
    }

    #[test]
    fn canonical_head_links_groups() {
        // "capacity" shares no word with "memory card", but its canonical does
        let dict = AspectDictionary::parse("memory\n", "memory: capacity").unwrap();
        let pairs = vec![pair("capacity"), pair("memory card")];
        let groups = group_aspects(&pairs, &dict);
        assert_eq!(
            labels(&groups),
            vec![("memory", vec!["capacity", "memory card"])]
        );
    }

    #[test]
    fn empty_input() {
        assert!(group_aspects(&[], &AspectDictionary::default()).is_empty());
    }
}
