//! The Penn Treebank part-of-speech tag inventory.

use std::fmt;
use std::str::FromStr;

macro_rules! penn_tags {
    ($($variant:ident => $label:literal,)*) => {
        /// A Penn Treebank POS tag. The set is closed: parsing any other label fails.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PennTag {
            $($variant,)*
        }

        impl PennTag {
            pub const ALL: &'static [PennTag] = &[$(PennTag::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(PennTag::$variant => $label,)*
                }
            }
        }

        impl FromStr for PennTag {
            type Err = UnknownTag;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($label => Ok(PennTag::$variant),)*
                    _ => Err(UnknownTag(s.to_string())),
                }
            }
        }
    };
}

penn_tags! {
    CC => "CC",
    CD => "CD",
    DT => "DT",
    EX => "EX",
    FW => "FW",
    IN => "IN",
    JJ => "JJ",
    JJR => "JJR",
    JJS => "JJS",
    LS => "LS",
    MD => "MD",
    NN => "NN",
    NNS => "NNS",
    NNP => "NNP",
    NNPS => "NNPS",
    PDT => "PDT",
    POS => "POS",
    PRP => "PRP",
    PRPS => "PRP$",
    RB => "RB",
    RBR => "RBR",
    RBS => "RBS",
    RP => "RP",
    SYM => "SYM",
    TO => "TO",
    UH => "UH",
    VB => "VB",
    VBD => "VBD",
    VBG => "VBG",
    VBN => "VBN",
    VBP => "VBP",
    VBZ => "VBZ",
    WDT => "WDT",
    WP => "WP",
    WPS => "WP$",
    WRB => "WRB",
    Hash => "#",
    Dollar => "$",
    CloseQuote => "''",
    OpenQuote => "``",
    OpenParen => "(",
    CloseParen => ")",
    LeftBracket => "-LRB-",
    RightBracket => "-RRB-",
    Comma => ",",
    Period => ".",
    Colon => ":",
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown Penn Treebank tag {:?}", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl fmt::Display for PennTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl PennTag {
    pub fn is_noun(self) -> bool {
        matches!(
            self,
            PennTag::NN | PennTag::NNS | PennTag::NNP | PennTag::NNPS
        )
    }

    pub fn is_adjective(self) -> bool {
        matches!(self, PennTag::JJ | PennTag::JJR | PennTag::JJS)
    }

    pub fn is_adverb(self) -> bool {
        matches!(self, PennTag::RB | PennTag::RBR | PennTag::RBS)
    }

    pub fn is_verb(self) -> bool {
        matches!(
            self,
            PennTag::VB | PennTag::VBD | PennTag::VBG | PennTag::VBN | PennTag::VBP | PennTag::VBZ
        )
    }

    /// Tags an opinion word may carry in a pattern: adjectives, adverbs and
    /// the participial/past verb forms.
    pub fn is_opinion_role(self) -> bool {
        self.is_adjective()
            || self.is_adverb()
            || matches!(self, PennTag::VBD | PennTag::VBG | PennTag::VBN)
    }
}
