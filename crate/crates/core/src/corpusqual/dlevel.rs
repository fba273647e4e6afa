//! Cue-based D-level classification of sentence complexity.
//!
//! There is no parser here. Each rule looks for a surface cue of one
//! construction (an infinitive after a verb, a relative pronoun after a
//! noun, a subordinator followed by a clause, ...). Cues are grouped into
//! five kinds, each tied to a level:
//!
//! | level | cue kind |
//! | ----- | -------- |
//! | 1 | non-finite complement sharing the main subject (`want to eat`, `enjoy eating`) |
//! | 2 | coordination of full clauses (`..., and it is ...`) |
//! | 3 | relative or complement clause after the main verb (`a pub that serves`, `say that`) |
//! | 4 | comparative, or non-finite complement with its own subject (`cheaper than`, `asked us to wait`) |
//! | 5 | subject-modifying relative, subject clause or adverbial clause (`The pub that ... is`, `because`) |
//!
//! A sentence with cues of two different kinds is level 6; three or more
//! cues spanning at least two kinds is level 7. Otherwise the level of the
//! single cue kind present wins, and no cue means level 0.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::textproc::{Sentence, TokenKind};

pub const RULESET_VERSION: &str = "dlevel-cues/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CueKind {
    NonFiniteComplement,
    ClauseCoordination,
    ObjectClause,
    ComparativeOrOwnSubject,
    SubjectOrAdverbialClause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cue {
    pub kind: CueKind,
    /// Index of the triggering token in the sentence.
    pub position: usize,
}

// (base, third person singular, past) for verbs with irregular forms
const IRREGULAR: &[(&str, &str, &str)] = &[
    ("be", "is", "was"),
    ("have", "has", "had"),
    ("do", "does", "did"),
    ("go", "goes", "went"),
    ("get", "gets", "got"),
    ("make", "makes", "made"),
    ("take", "takes", "took"),
    ("give", "gives", "gave"),
    ("come", "comes", "came"),
    ("see", "sees", "saw"),
    ("know", "knows", "knew"),
    ("think", "thinks", "thought"),
    ("say", "says", "said"),
    ("tell", "tells", "told"),
    ("find", "finds", "found"),
    ("eat", "eats", "ate"),
    ("drink", "drinks", "drank"),
    ("sell", "sells", "sold"),
    ("buy", "buys", "bought"),
    ("pay", "pays", "paid"),
    ("begin", "begins", "began"),
    ("keep", "keeps", "kept"),
    ("let", "lets", "let"),
    ("feel", "feels", "felt"),
    ("meet", "meets", "met"),
    ("sit", "sits", "sat"),
    ("choose", "chooses", "chose"),
    ("mean", "means", "meant"),
    ("hear", "hears", "heard"),
    ("run", "runs", "ran"),
    ("spend", "spends", "spent"),
    ("bring", "brings", "brought"),
    ("hold", "holds", "held"),
    ("win", "wins", "won"),
    ("lose", "loses", "lost"),
    ("leave", "leaves", "left"),
    ("become", "becomes", "became"),
    ("grow", "grows", "grew"),
    ("drive", "drives", "drove"),
    ("stand", "stands", "stood"),
    ("understand", "understands", "understood"),
    ("put", "puts", "put"),
    ("cost", "costs", "cost"),
    ("serve", "serves", "served"),
];

const REGULAR: &[&str] = &[
    "want", "like", "love", "need", "try", "use", "offer", "provide", "visit", "book", "order", "enjoy", "prefer",
    "recommend", "cook", "open", "close", "start", "stop", "help", "ask", "allow", "expect", "encourage", "invite",
    "advise", "require", "attract", "welcome", "stay", "seem", "look", "sound", "taste", "hope", "plan", "decide",
    "learn", "agree", "believe", "claim", "suggest", "notice", "realize", "realise", "show", "feature", "include",
    "host", "boast", "locate", "own", "rate", "review", "call", "name", "cater", "fill", "wait", "play", "arrive",
    "return", "walk", "live", "work", "check", "hate", "avoid", "finish", "mind", "consider", "deliver", "charge",
    "accommodate", "satisfy", "impress", "disappoint", "please", "remain", "appear", "change", "improve", "explore",
    "discover", "experience", "relax", "celebrate", "share", "dine", "travel", "reach", "pass", "reserve", "earn",
    "receive", "deserve", "lack", "miss", "wonder", "explain", "guess", "reckon", "suppose", "admit", "promise",
    "prepare", "specialize", "specialise", "focus", "attend", "eat", "relish", "head", "pick", "treat", "watch",
    "listen", "talk", "speak", "recommend", "close", "happen", "want", "welcome", "list",
];

// 3sg forms that are far more often plural nouns in restaurant text
const NOUN_DOMINANT: &[&str] = &[
    "reviews", "rates", "views", "books", "orders", "drinks", "names", "calls", "costs", "changes", "plays",
    "shows", "works", "checks", "looks", "sounds", "tastes", "walks", "passes", "returns", "charges", "hosts",
    "experiences", "features", "lists", "treats", "heads", "picks", "promises", "visits", "plans", "claims",
    "wishes", "shares", "cooks",
];

const AUXILIARIES: &[&str] = &[
    "is", "are", "was", "were", "am", "be", "has", "have", "had", "do", "does", "did", "will", "would", "can",
    "could", "shall", "should", "may", "might", "must", "'s", "'re", "'m", "isn't", "aren't", "wasn't", "weren't",
    "hasn't", "haven't", "hadn't", "doesn't", "don't", "didn't", "won't", "wouldn't", "can't", "cannot",
    "couldn't", "shouldn't", "it's", "that's", "there's", "they're", "we're", "you're", "i'm", "he's", "she's",
];

const SUBJECT_PRONOUNS: &[&str] = &["i", "you", "we", "they", "he", "she", "it", "there", "everyone", "everybody", "nobody", "people", "someone"];
const OBJECT_PRONOUNS: &[&str] = &["me", "you", "us", "them", "him", "her", "it", "everyone", "people", "customers", "guests", "diners"];
const DETERMINERS: &[&str] = &[
    "the", "a", "an", "its", "their", "his", "her", "our", "my", "your", "this", "these", "those", "some", "many",
    "most", "all", "every", "each", "no", "any", "several",
];
const PREPOSITIONS: &[&str] = &[
    "in", "on", "at", "by", "for", "with", "of", "near", "from", "to", "into", "onto", "about", "over", "under",
    "between", "beside", "behind", "across", "along", "around", "outside", "inside", "within", "without", "off",
    "past", "through", "towards", "toward", "like", "per", "via", "opposite",
];
const COORDINATORS: &[&str] = &["and", "but", "or", "so", "yet"];
const ALWAYS_SUBORDINATORS: &[&str] = &["because", "although", "though", "unless", "whereas", "if", "cos"];
const CLAUSE_SUBORDINATORS: &[&str] = &["when", "while", "whilst", "since", "until", "after", "before", "once", "whenever"];
const RELATIVES: &[&str] = &["that", "which", "who", "whom", "whose", "where"];
const SUBJECT_CLAUSE_OPENERS: &[&str] = &["what", "whatever", "whoever", "whichever"];
const WH_WORDS: &[&str] = &["what", "why", "how", "where", "whether", "when", "who", "which", "if"];
const COMPLEMENT_VERBS: &[&str] = &[
    "say", "says", "said", "think", "thinks", "thought", "know", "knows", "knew", "believe", "believes",
    "believed", "claim", "claims", "claimed", "hope", "hopes", "hoped", "feel", "feels", "felt", "agree",
    "agrees", "agreed", "suggest", "suggests", "suggested", "notice", "noticed", "realize", "realized",
    "realise", "realised", "mean", "means", "meant", "find", "finds", "found", "hear", "heard", "see", "sees",
    "saw", "show", "shows", "showed", "admit", "admits", "admitted", "reckon", "guess", "suppose", "promise",
    "promised", "wonder", "wonders", "wondered", "explain", "explains", "explained", "understand",
    "understands", "understood", "decide", "decided", "ask", "asks", "asked", "tell", "tells", "told",
    "learn", "learned", "learnt", "doubt", "bet", "sure", "aware",
];
const BARE_COMPLEMENT_VERBS: &[&str] = &[
    "say", "says", "said", "think", "thinks", "thought", "believe", "believes", "believed", "feel", "feels",
    "felt", "guess", "reckon", "suppose", "hope", "hopes", "hoped", "bet", "know", "knows", "knew", "sure",
];
const OBJECT_CONTROL_VERBS: &[&str] = &[
    "want", "wants", "wanted", "ask", "asks", "asked", "tell", "tells", "told", "allow", "allows", "allowed",
    "expect", "expects", "expected", "encourage", "encourages", "encouraged", "invite", "invites", "invited",
    "advise", "advises", "advised", "require", "requires", "required", "need", "needs", "needed", "like",
    "likes", "love", "loves", "prefer", "prefers", "get", "gets", "got", "persuade", "persuaded", "urge",
    "urged", "enable", "enables", "permit", "permits",
];
const CAUSATIVE_VERBS: &[&str] = &["let", "lets", "make", "makes", "made", "help", "helps", "helped", "have", "has", "had", "watch", "see", "saw", "hear", "heard"];
const GERUND_TRIGGERS: &[&str] = &[
    "enjoy", "enjoys", "enjoyed", "love", "loves", "loved", "like", "likes", "liked", "hate", "hates", "prefer",
    "prefers", "stop", "stops", "stopped", "start", "starts", "started", "begin", "begins", "began", "keep",
    "keeps", "kept", "avoid", "avoids", "finish", "finished", "recommend", "recommends", "recommended",
    "suggest", "suggests", "consider", "worth", "mind", "try", "tried", "miss", "missed", "go", "goes", "went",
    "imagine", "risk", "quit", "continue", "continues", "practise", "practice",
];
const NON_GERUND_ING: &[&str] = &[
    "building", "evening", "morning", "thing", "nothing", "something", "anything", "everything", "king",
    "ring", "spring", "ceiling", "wedding", "pudding", "setting", "seating", "dining", "clothing", "lighting",
    "ceiling", "during", "parking", "housing", "feeling", "meaning", "ending", "timing", "being",
];
// exception: "dining" is a noun in "dining area" but a gerund after a trigger
const COMPARATIVES: &[&str] = &["more", "less", "fewer", "better", "worse", "cheaper", "higher", "lower"];
const NON_COMPARATIVE_ER: &[&str] = &[
    "other", "rather", "never", "ever", "under", "over", "after", "water", "dinner", "center", "corner",
    "number", "whether", "together", "either", "neither", "however", "her", "per", "order", "cater", "offer",
];

fn set(words: &[&str]) -> HashSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// Word lists and level assignments driving [`dlevel`].
#[derive(Debug, Clone)]
pub struct DLevelRuleSet {
    pub version: String,
    /// Level of each cue kind when it is the only kind present.
    pub levels: Vec<(CueKind, u8)>,
    /// Level for cues of two or more kinds.
    pub mixed_level: u8,
    /// Level for three or more cues spanning two or more kinds.
    pub deep_level: u8,
    pub base_verbs: HashSet<String>,
    pub finite_forms: HashSet<String>,
    pub past_forms: HashSet<String>,
    pub subject_pronouns: HashSet<String>,
    pub object_pronouns: HashSet<String>,
    pub determiners: HashSet<String>,
    pub prepositions: HashSet<String>,
    pub coordinators: HashSet<String>,
    pub always_subordinators: HashSet<String>,
    pub clause_subordinators: HashSet<String>,
    pub relatives: HashSet<String>,
    pub subject_clause_openers: HashSet<String>,
    pub wh_words: HashSet<String>,
    pub complement_verbs: HashSet<String>,
    pub bare_complement_verbs: HashSet<String>,
    pub object_control_verbs: HashSet<String>,
    pub causative_verbs: HashSet<String>,
    pub gerund_triggers: HashSet<String>,
    pub non_gerund_ing: HashSet<String>,
    pub comparatives: HashSet<String>,
    pub non_comparative_er: HashSet<String>,
}

fn third_person(base: &str) -> String {
    if base.ends_with('y') && !base.ends_with("ay") && !base.ends_with("ey") && !base.ends_with("oy") {
        format!("{}ies", &base[..base.len() - 1])
    } else if base.ends_with('s') || base.ends_with("sh") || base.ends_with("ch") || base.ends_with('x') || base.ends_with('o') {
        format!("{base}es")
    } else {
        format!("{base}s")
    }
}

fn past(base: &str) -> String {
    if base.ends_with('e') {
        format!("{base}d")
    } else if base.ends_with('y') && !base.ends_with("ay") && !base.ends_with("ey") && !base.ends_with("oy") {
        format!("{}ied", &base[..base.len() - 1])
    } else if base == "stop" || base == "plan" || base == "admit" || base == "prefer" || base == "permit" {
        let last = base.chars().last().expect("non-empty");
        format!("{base}{last}ed")
    } else {
        format!("{base}ed")
    }
}

impl Default for DLevelRuleSet {
    fn default() -> Self {
        let mut base_verbs = HashSet::new();
        let mut finite_forms = set(AUXILIARIES);
        let mut past_forms = HashSet::new();
        let noun_dominant = set(NOUN_DOMINANT);
        for &(base, third, pst) in IRREGULAR {
            base_verbs.insert(base.to_string());
            if !noun_dominant.contains(third) {
                finite_forms.insert(third.to_string());
            }
            finite_forms.insert(pst.to_string());
        }
        finite_forms.extend(["were", "are", "am"].map(String::from));
        for &base in REGULAR {
            base_verbs.insert(base.to_string());
            let third = third_person(base);
            if !noun_dominant.contains(&third) {
                finite_forms.insert(third);
            }
            past_forms.insert(past(base));
        }
        Self {
            version: RULESET_VERSION.to_string(),
            levels: vec![
                (CueKind::NonFiniteComplement, 1),
                (CueKind::ClauseCoordination, 2),
                (CueKind::ObjectClause, 3),
                (CueKind::ComparativeOrOwnSubject, 4),
                (CueKind::SubjectOrAdverbialClause, 5),
            ],
            mixed_level: 6,
            deep_level: 7,
            base_verbs,
            finite_forms,
            past_forms,
            subject_pronouns: set(SUBJECT_PRONOUNS),
            object_pronouns: set(OBJECT_PRONOUNS),
            determiners: set(DETERMINERS),
            prepositions: set(PREPOSITIONS),
            coordinators: set(COORDINATORS),
            always_subordinators: set(ALWAYS_SUBORDINATORS),
            clause_subordinators: set(CLAUSE_SUBORDINATORS),
            relatives: set(RELATIVES),
            subject_clause_openers: set(SUBJECT_CLAUSE_OPENERS),
            wh_words: set(WH_WORDS),
            complement_verbs: set(COMPLEMENT_VERBS),
            bare_complement_verbs: set(BARE_COMPLEMENT_VERBS),
            object_control_verbs: set(OBJECT_CONTROL_VERBS),
            causative_verbs: set(CAUSATIVE_VERBS),
            gerund_triggers: set(GERUND_TRIGGERS),
            non_gerund_ing: set(NON_GERUND_ING),
            comparatives: set(COMPARATIVES),
            non_comparative_er: set(NON_COMPARATIVE_ER),
        }
    }
}

/// Lowercased view of one sentence with the lookups the rules share.
struct View<'a> {
    words: Vec<&'a str>,
    capitalized: Vec<bool>,
    is_word: Vec<bool>,
    question: bool,
    rules: &'a DLevelRuleSet,
}

impl<'a> View<'a> {
    fn new(sentence: &'a Sentence, rules: &'a DLevelRuleSet) -> Self {
        let words = sentence.tokens.iter().map(|t| t.lower.as_str()).collect();
        let capitalized = sentence
            .tokens
            .iter()
            .map(|t| t.surface.chars().next().is_some_and(char::is_uppercase))
            .collect();
        let is_word = sentence.tokens.iter().map(|t| t.kind == TokenKind::Word).collect();
        let question = sentence.tokens.last().is_some_and(|t| t.surface == "?");
        Self {
            words,
            capitalized,
            is_word,
            question,
            rules,
        }
    }

    fn len(&self) -> usize {
        self.words.len()
    }

    fn get(&self, i: usize) -> &str {
        self.words.get(i).copied().unwrap_or("")
    }

    fn in_set(&self, i: usize, set: &HashSet<String>) -> bool {
        i < self.len() && set.contains(self.words[i])
    }

    fn is_function_word(&self, i: usize) -> bool {
        let r = self.rules;
        [
            &r.determiners,
            &r.prepositions,
            &r.subject_pronouns,
            &r.object_pronouns,
            &r.coordinators,
            &r.relatives,
            &r.always_subordinators,
            &r.clause_subordinators,
        ]
        .iter()
        .any(|s| self.in_set(i, s))
            || self.in_set(i, &r.finite_forms)
    }

    fn is_finite(&self, i: usize) -> bool {
        if i >= self.len() || !self.is_word[i] {
            return false;
        }
        let r = self.rules;
        let w = self.words[i];
        if r.finite_forms.contains(w) {
            return true;
        }
        let after_subject = i > 0
            && (self.in_set(i - 1, &r.subject_pronouns)
                || (self.is_word[i - 1]
                    && self.words[i - 1].len() > 3
                    && self.words[i - 1].ends_with('s')
                    && !self.is_function_word(i - 1)
                    && !r.base_verbs.contains(self.words[i - 1])));
        if r.past_forms.contains(w) || r.base_verbs.contains(w) {
            // imperatives open a sentence with a bare verb
            return after_subject || (i == 0 && r.base_verbs.contains(w) && !self.question);
        }
        false
    }

    fn first_finite(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.is_finite(i))
    }

    fn is_nounish(&self, i: usize) -> bool {
        i < self.len()
            && self.is_word[i]
            && !self.is_function_word(i)
            && !self.in_set(i, &self.rules.complement_verbs)
            && !self.is_finite(i)
    }

    fn is_subject_start(&self, i: usize) -> bool {
        i < self.len()
            && self.is_word[i]
            && (self.in_set(i, &self.rules.subject_pronouns)
                || self.in_set(i, &self.rules.determiners)
                || self.capitalized[i]
                || !self.is_function_word(i))
            && !(self.is_finite(i) && !self.in_set(i, &self.rules.subject_pronouns))
    }

    /// A finite verb occurs in `from..from+window` before any clause
    /// boundary token.
    fn finite_within(&self, from: usize, window: usize) -> bool {
        for j in from..(from + window).min(self.len()) {
            let w = self.words[j];
            if j > from && (matches!(w, "," | "." | ";" | ":" | "!" | "?") || self.rules.relatives.contains(w)) {
                return false;
            }
            if self.is_finite(j) {
                return true;
            }
        }
        false
    }

    fn starts_clause(&self, i: usize) -> bool {
        self.is_subject_start(i) && self.finite_within(i, 5)
    }
}

fn relative_cues(v: &View, first_finite: Option<usize>, cues: &mut Vec<Cue>) {
    let r = v.rules;
    for i in 1..v.len() {
        if !v.in_set(i, &r.relatives) {
            continue;
        }
        let after_noun = v.is_nounish(i - 1)
            || (v.get(i - 1) == "," && i >= 2 && (v.is_nounish(i - 2) || v.capitalized[i - 2]));
        if !after_noun {
            continue;
        }
        if v.get(i) == "that" {
            let next = i + 1;
            let clause = v.is_finite(next)
                || v.in_set(next, &r.subject_pronouns)
                || v.in_set(next, &r.determiners)
                || v.capitalized.get(next).copied().unwrap_or(false);
            if !clause {
                continue;
            }
        }
        let kind = match first_finite {
            Some(f) if f < i => CueKind::ObjectClause,
            _ => CueKind::SubjectOrAdverbialClause,
        };
        cues.push(Cue { kind, position: i });
    }
}

fn complement_cues(v: &View, cues: &mut Vec<Cue>) {
    let r = v.rules;
    for i in 0..v.len().saturating_sub(1) {
        if !v.in_set(i, &r.complement_verbs) {
            continue;
        }
        let next = i + 1;
        let introduced = v.get(next) == "that" || (v.in_set(next, &r.wh_words) && v.finite_within(next + 1, 5));
        // "thinks the food is good": a bare clause with its own subject
        let bare = v.in_set(i, &r.bare_complement_verbs)
            && (v.in_set(next, &r.subject_pronouns) || v.in_set(next, &r.determiners) || v.capitalized[next])
            && v.finite_within(next + 1, 4);
        if introduced || bare {
            cues.push(Cue {
                kind: CueKind::ObjectClause,
                position: next,
            });
        }
    }
}

fn is_comparative(v: &View, i: usize) -> bool {
    let w = v.get(i);
    v.rules.comparatives.contains(w)
        || (v.is_word.get(i).copied().unwrap_or(false)
            && w.len() > 4
            && w.ends_with("er")
            && !v.rules.non_comparative_er.contains(w))
}

/// Comparative and own-subject complement cues. Returns the positions of
/// `to` tokens consumed by own-subject complements.
fn comparative_cues(v: &View, cues: &mut Vec<Cue>) -> BTreeSet<usize> {
    let r = v.rules;
    let mut consumed = BTreeSet::new();
    for i in 0..v.len() {
        let w = v.get(i);
        if w == "than" && i > 0 && !matches!(v.get(i - 1), "rather" | "other") {
            if (i.saturating_sub(3)..i).any(|j| is_comparative(v, j)) {
                cues.push(Cue {
                    kind: CueKind::ComparativeOrOwnSubject,
                    position: i,
                });
            }
        } else if w == "as" && i + 2 < v.len() && v.get(i + 2) == "as" && v.get(i + 1) != "well" && v.is_word[i + 1]
            && !v.in_set(i + 1, &r.determiners)
        {
            cues.push(Cue {
                kind: CueKind::ComparativeOrOwnSubject,
                position: i,
            });
        } else if v.in_set(i, &r.object_control_verbs) || v.in_set(i, &r.causative_verbs) {
            // verb + short noun phrase + (to) verb
            for np_len in 1..=3 {
                let after = i + 1 + np_len;
                if after >= v.len() {
                    break;
                }
                let np_ok = (i + 1..after).all(|j| {
                    v.is_word[j]
                        && !v.in_set(j, &r.prepositions)
                        && !v.in_set(j, &r.coordinators)
                        && !v.in_set(j, &r.relatives)
                        && !v.is_finite(j)
                        && v.get(j) != "to"
                }) && (v.in_set(i + 1, &r.object_pronouns) || v.in_set(i + 1, &r.determiners) || v.is_nounish(i + 1));
                if !np_ok {
                    break;
                }
                let control = v.in_set(i, &r.object_control_verbs)
                    && v.get(after) == "to"
                    && v.in_set(after + 1, &r.base_verbs);
                let causative = v.in_set(i, &r.causative_verbs)
                    && v.in_set(after, &r.base_verbs)
                    && !v.in_set(after, &r.finite_forms);
                if control || causative {
                    cues.push(Cue {
                        kind: CueKind::ComparativeOrOwnSubject,
                        position: i,
                    });
                    if control {
                        consumed.insert(after);
                    }
                    break;
                }
            }
        }
    }
    consumed
}

fn non_finite_cues(v: &View, consumed: &BTreeSet<usize>, cues: &mut Vec<Cue>) {
    let r = v.rules;
    for i in 0..v.len() {
        let w = v.get(i);
        if w == "to" && !consumed.contains(&i) && v.in_set(i + 1, &r.base_verbs) {
            let prev = if i > 0 { v.get(i - 1) } else { "" };
            if !matches!(prev, "next" | "close" | "according" | "due" | "near" | "up") {
                cues.push(Cue {
                    kind: CueKind::NonFiniteComplement,
                    position: i,
                });
            }
        } else if i > 0
            && v.is_word[i]
            && w.len() >= 5
            && w.ends_with("ing")
            && v.in_set(i - 1, &r.gerund_triggers)
            && (!v.in_set(i, &r.non_gerund_ing) || w == "dining")
        {
            cues.push(Cue {
                kind: CueKind::NonFiniteComplement,
                position: i,
            });
        }
    }
}

fn coordination_cues(v: &View, first_finite: Option<usize>, cues: &mut Vec<Cue>) {
    let Some(first) = first_finite else {
        return;
    };
    for i in first + 1..v.len() {
        if v.in_set(i, &v.rules.coordinators) && v.starts_clause(i + 1) {
            cues.push(Cue {
                kind: CueKind::ClauseCoordination,
                position: i,
            });
        }
    }
}

fn subordinate_cues(v: &View, cues: &mut Vec<Cue>) {
    let r = v.rules;
    if !v.question && v.in_set(0, &r.subject_clause_openers) && v.finite_within(1, 4) {
        cues.push(Cue {
            kind: CueKind::SubjectOrAdverbialClause,
            position: 0,
        });
    }
    for i in 0..v.len() {
        if v.in_set(i, &r.always_subordinators) {
            // "ask if", "see if" are complements, handled elsewhere
            if v.get(i) == "if" && i > 0 && v.in_set(i - 1, &r.complement_verbs) {
                continue;
            }
            cues.push(Cue {
                kind: CueKind::SubjectOrAdverbialClause,
                position: i,
            });
        } else if v.in_set(i, &r.clause_subordinators) && !(i == 0 && v.question) && v.starts_clause(i + 1) {
            cues.push(Cue {
                kind: CueKind::SubjectOrAdverbialClause,
                position: i,
            });
        }
    }
}

/// All cues found in a sentence, sorted by position.
pub fn detect_cues(sentence: &Sentence, rules: &DLevelRuleSet) -> Vec<Cue> {
    let v = View::new(sentence, rules);
    let first_finite = v.first_finite();
    let mut cues = Vec::new();
    relative_cues(&v, first_finite, &mut cues);
    complement_cues(&v, &mut cues);
    let consumed = comparative_cues(&v, &mut cues);
    non_finite_cues(&v, &consumed, &mut cues);
    coordination_cues(&v, first_finite, &mut cues);
    subordinate_cues(&v, &mut cues);
    cues.sort_by_key(|c| (c.position, c.kind));
    cues.dedup_by_key(|c| c.position);
    cues
}

/// Level implied by a set of cues.
pub fn level_from_cues(cues: &[Cue], rules: &DLevelRuleSet) -> u8 {
    let kinds: BTreeSet<CueKind> = cues.iter().map(|c| c.kind).collect();
    match kinds.len() {
        0 => 0,
        1 => {
            let kind = *kinds.iter().next().expect("one kind");
            rules
                .levels
                .iter()
                .find(|(k, _)| *k == kind)
                .map_or(0, |&(_, level)| level)
        }
        _ if cues.len() >= 3 => rules.deep_level,
        _ => rules.mixed_level,
    }
}

/// D-level (0..=7) of one sentence.
pub fn dlevel(sentence: &Sentence, rules: &DLevelRuleSet) -> u8 {
    level_from_cues(&detect_cues(sentence, rules), rules)
}
