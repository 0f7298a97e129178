"""Exception hierarchy. Every data-contract violation gets a named class so
callers (CLI, API) can map failures to exit codes / structured payloads
without string matching."""


class PolicyDiffError(Exception):
    """Base class for all library errors."""


# --- ingest ---------------------------------------------------------------

class IngestError(PolicyDiffError):
    pass


class MalformedRow(IngestError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownState(IngestError):
    def __init__(self, value: str, line: int | None = None):
        loc = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown state code {value!r}{loc}")
        self.value = value


class UnresolvedPolicy(IngestError):
    def __init__(self, policy_id: str, line: int | None = None):
        loc = f" (line {line})" if line is not None else ""
        super().__init__(f"event references policy {policy_id!r} absent from metadata{loc}")
        self.policy_id = policy_id


class EmptyInput(IngestError):
    pass


class MissingFactorColumn(IngestError):
    def __init__(self, name: str):
        super().__init__(f"factor column {name!r} not present in panel input")
        self.name = name


class NonNumericValue(IngestError):
    def __init__(self, state: str, year: int, factor: str, raw: str):
        super().__init__(f"non-numeric value {raw!r} at ({state}, {year}, {factor})")
        self.state, self.year, self.factor, self.raw = state, year, factor, raw


class DuplicateStateYear(IngestError):
    def __init__(self, state: str, year: int):
        super().__init__(f"duplicate panel row for ({state}, {year})")
        self.state, self.year = state, year


class AllMissingSeries(IngestError):
    def __init__(self, state: str, factor: str):
        super().__init__(f"series ({state}, {factor}) has no observations to impute from")
        self.state, self.factor = state, factor


class UnknownTopic(PolicyDiffError):
    def __init__(self, topic: str):
        super().__init__(f"unknown topic {topic!r}")
        self.topic = topic


class UnknownFocus(PolicyDiffError):
    def __init__(self, focus: str):
        super().__init__(f"focus {focus!r} matches no state, topic, or policy")
        self.focus = focus


class UnknownPolicy(PolicyDiffError):
    def __init__(self, policy_id: str):
        super().__init__(f"unknown policy {policy_id!r}")
        self.policy_id = policy_id


class UnknownFactor(PolicyDiffError):
    def __init__(self, factor: str):
        super().__init__(f"unknown factor {factor!r}")
        self.factor = factor


class YearOutOfPanel(PolicyDiffError):
    def __init__(self, year: int):
        super().__init__(f"year {year} outside the covariate panel range")
        self.year = year


# --- inference ------------------------------------------------------------

class InferenceError(PolicyDiffError):
    pass


class NegativeDelta(InferenceError):
    pass


class SelfLoop(InferenceError):
    pass


class EmptyCascadeSet(InferenceError):
    pass


class CascadeMismatch(InferenceError):
    pass


# --- survival -------------------------------------------------------------

class SurvivalError(PolicyDiffError):
    pass


class PanelCoverageGap(SurvivalError):
    def __init__(self, state: str, year: int):
        super().__init__(f"no covariates for ({state}, {year}) after imputation")
        self.state, self.year = state, year


class NoEvents(SurvivalError):
    pass


class DegenerateDesign(SurvivalError):
    """No non-constant covariate column survives the degeneracy sweep."""


# --- metrics --------------------------------------------------------------

class NonconvergencePastCap(PolicyDiffError):
    pass
