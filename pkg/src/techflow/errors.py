"""Exception types raised by the techflow pipeline.

Every operation-level failure derives from TechflowError so the CLI can
map any pipeline error to a single diagnostic exit path.
"""


class TechflowError(Exception):
    pass


# record parsing / canonical format
class MalformedRecord(TechflowError):
    pass


class EncodingError(TechflowError):
    pass


class SchemaError(TechflowError):
    pass


class DuplicateDoi(TechflowError):
    pass


# corpus filtering
class EmptyCorpus(TechflowError):
    pass


class SingleClass(TechflowError):
    pass


class TooFewExamples(TechflowError):
    pass


class PoolTooSmall(TechflowError):
    pass


# citation graph
class SameLabel(TechflowError):
    pass


class TooFewTechnologies(TechflowError):
    pass


class IndexOutOfRange(TechflowError):
    pass


# advancement scoring
class SameIndex(TechflowError):
    pass


class InvalidParams(TechflowError):
    pass


# baselines
class AllZeroMatrix(TechflowError):
    pass


# time series
class EmptySeries(TechflowError):
    pass


class InvalidRange(TechflowError):
    pass


class NoAssessableYear(TechflowError):
    pass


# evaluation
class UnknownLabel(TechflowError):
    pass


class TooFewLabels(TechflowError):
    pass


class NoEvaluableYear(TechflowError):
    pass


# synthetic corpora
class InvalidSpec(TechflowError):
    pass
