from typing import Optional, Sequence


class WeilHeightException(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class ParserException(WeilHeightException):
    pass


class AlgebraException(WeilHeightException):
    pass


class NotPrime(AlgebraException):
    pass


class ZeroPolynomial(AlgebraException):
    pass


class BothZero(AlgebraException):
    pass


class NotSquarefree(AlgebraException):
    pass


class NotMonic(AlgebraException):
    pass


class PrecisionExhausted(AlgebraException):
    pass


class FieldException(WeilHeightException):
    pass


class NotIrreducible(FieldException):
    pass


class Unverifiable(FieldException):
    pass


class BadAutomorphism(FieldException):
    pass


class NotClosed(FieldException):
    pass


class FieldMismatch(FieldException):
    pass


class DivisionByZero(FieldException):
    pass


class ZeroElement(FieldException):
    pass


class NotRealQuadratic(FieldException):
    pass


class PlaceException(WeilHeightException):
    pass


class NonMaximalOrder(PlaceException):
    def __init__(self, prime: int, message: Optional[str] = None):
        super().__init__(
            message or f"Z[t] is not maximal at {prime} and {prime} has several places"
        )
        self.prime = prime


class TowerException(WeilHeightException):
    pass


class BadEmbedding(TowerException):
    def __init__(self, message: str, residual: Sequence[str] = ()):
        super().__init__(message)
        self.residual = tuple(residual)


class NotGalois(TowerException):
    pass


class AmbiguousRestriction(TowerException):
    pass


class RefinementMismatch(TowerException):
    def __init__(self, message: str, place_id: str):
        super().__init__(message)
        self.place_id = place_id


class AmbiguousAction(TowerException):
    pass


class NotStabilized(TowerException):
    pass


class NoSuchLevel(TowerException):
    pass


class SpaceException(WeilHeightException):
    pass


class BadExponent(SpaceException):
    pass


class LevelMismatch(SpaceException):
    pass


class NotAnSUnit(SpaceException):
    def __init__(self, message: str, place_id: str):
        super().__init__(message)
        self.place_id = place_id


class BadShape(SpaceException):
    pass


class NotInX(SpaceException):
    pass


class EmptyBasis(SpaceException):
    pass
