"""Exception types shared across the package."""


class DiagannoError(Exception):
    """Base class for all library errors."""


class ModelError(DiagannoError):
    """Invalid construction of a core model value."""


class DuplicateElementId(ModelError):
    pass


class ShapeError(ModelError):
    pass


class CodecError(DiagannoError):
    """Base class for parse/serialize failures."""


class MalformedDocument(CodecError):
    pass


class DanglingReference(CodecError):
    pass


class UnknownRelationType(DiagannoError):
    """Relation type missing from the active registry (parse or edit)."""


class CrossLayerDangling(CodecError):
    pass


class RootNotFound(CodecError):
    pass


class EditError(DiagannoError):
    """Base class for rejected edit operations."""


class UnknownElement(EditError):
    pass


class TooFewParts(EditError):
    pass


class SplitArrowheadForbidden(EditError):
    pass


class UnsplittableElement(EditError):
    """Split requested on a kind that has no parts (arrows)."""


class NuclearityViolation(EditError):
    pass


class ArrowheadNotAllowed(EditError):
    """Arrowheads are barred from the annotation layers."""


class DanglingRef(EditError):
    pass


class BadConnector(EditError):
    pass


class ReplayDivergence(EditError):
    """An edit log does not reproduce the state it claims to produce."""
