"""Exception types shared across the pipeline."""


class IGPipeError(Exception):
    """Base class for all igpipe errors."""


class ParseError(IGPipeError):
    """Malformed CoNLL-U input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(IGPipeError):
    """A domain invariant does not hold (tree structure, lexicon, tags)."""


class TrainingError(IGPipeError):
    """The classifier cannot be fitted on the given corpus."""


class LexiconError(IGPipeError):
    """Invalid entity lexicon definition."""


class AlignmentError(IGPipeError):
    """Predicted and gold corpora do not align statement-by-statement."""


class PipelineError(IGPipeError):
    """A pipeline stage failed; names the stage and offending statement."""

    def __init__(self, stage: str, message: str, statement: str | None = None):
        self.stage = stage
        self.statement = statement
        where = f" (statement {statement})" if statement else ""
        super().__init__(f"stage {stage}: {message}{where}")
