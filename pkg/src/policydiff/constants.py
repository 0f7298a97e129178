"""Shared vocabularies: state codes, topic exclusions, default factor list."""

# The 50 US states, alphabetical by postal code. No DC, no territories.
STATE_CODES = (
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA",
    "HI", "IA", "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD",
    "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH",
    "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC",
    "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY",
)

STATE_SET = frozenset(STATE_CODES)

# Topics dropped at ingest: no subnational diffusion events are coded there.
EXCLUDED_TOPICS = frozenset({"Foreign Trade", "Technology"})

# Hard bounds of the archival record; parse rejects years outside these
# unless the caller widens them.
DATA_YEAR_BOUNDS = (1691, 2017)

# Post-war default analysis window.
DEFAULT_YEAR_RANGE = (1950, 2017)

# Default contextual-factor selection. The panel source carries thousands of
# columns; this subset is configuration, overridable via --factors.
DEFAULT_FACTORS = (
    "Dynamic State Innovativeness",
    "Foreign Born",
    "African American",
    "Crime Rate",
    "Senate Democrats",
    "House Democrats",
    "Population",
    "Median Household Income",
    "Unemployment Rate",
    "Urban Population",
    "College Graduates",
    "Governor Democrat",
    "GDP per Capita",
    "Poverty Rate",
)

# Structurally inapplicable series zero-filled during imputation.
# Nebraska's unicameral, nonpartisan legislature has no partisan chamber
# counts. Configuration, not code: extend for other structural cases.
DEFAULT_INAPPLICABLE_ZERO = (
    ("NE", "Senate Democrats"),
    ("NE", "House Democrats"),
)

# Sentinel parent for cascade adopters not explained by any inferred edge.
BACKGROUND = "__background__"

TOPIC_ALL = "ALL"
