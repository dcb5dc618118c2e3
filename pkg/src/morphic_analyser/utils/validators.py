"""
Validation utilities and the error hierarchy for algebraic inputs.
"""

from typing import Optional, Sequence, Tuple

from sympy import isprime


class ValidationError(Exception):
    """Custom exception for validation errors."""
    pass


class CapExceededError(ValidationError):
    """Raised when a construction or scan would exceed a configured cap."""
    pass


class RingConstructionError(ValidationError):
    """Raised when operation tables do not define a unital associative ring."""
    pass


class MorphismError(ValidationError):
    """Raised when an image array is not a unital ring homomorphism."""
    pass


class BimoduleError(ValidationError):
    """Raised when action tables do not define an (R,R)-bimodule."""
    pass


class PreconditionError(ValidationError):
    """Raised when an operation is called outside its hypotheses."""
    pass


class TheoremViolationError(Exception):
    """Alarm raised when a construction that must succeed fails."""
    pass


class Validators:
    """Collection of validation methods."""

    @staticmethod
    def validate_order(order: int, cap: int, what: str = "Ring") -> Tuple[bool, Optional[str]]:
        """
        Validate a structure order against a cap.

        Args:
            order: Number of elements the construction would have
            cap: Maximum allowed order
            what: Name of the structure (for error messages)

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if order < 1:
            return False, f"{what} order must be positive (got {order})"

        if order > cap:
            return False, f"{what} order {order} exceeds cap {cap}"

        return True, None

    @staticmethod
    def validate_prime(p: int) -> Tuple[bool, Optional[str]]:
        """
        Validate that p is a prime number.

        Args:
            p: Candidate characteristic

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if not isinstance(p, int) or not isprime(p):
            return False, f"{p} is not prime"
        return True, None

    @staticmethod
    def validate_index(index: int, order: int, what: str = "Element") -> Tuple[bool, Optional[str]]:
        """
        Validate an element index.

        Args:
            index: Element index
            order: Order of the structure it indexes

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if not 0 <= index < order:
            return False, f"{what} index {index} out of range 0..{order - 1}"
        return True, None

    @staticmethod
    def validate_image(image: Sequence[int], source_order: int, target_order: int) -> Tuple[bool, Optional[str]]:
        """
        Validate the shape of a morphism image array.

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if len(image) != source_order:
            return False, f"Image has length {len(image)}, expected {source_order}"

        bad = [v for v in image if not 0 <= int(v) < target_order]
        if bad:
            return False, f"Image entries {bad[:5]} out of range 0..{target_order - 1}"

        return True, None

    @staticmethod
    def validate_bound(bound: int, name: str = "bound") -> Tuple[bool, Optional[str]]:
        """
        Validate a positive sampling or enumeration bound.

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        if bound < 1:
            return False, f"{name} must be at least 1 (got {bound})"
        return True, None

    @staticmethod
    def require(check: Tuple[bool, Optional[str]], error: type = ValidationError) -> None:
        """Raise error with the message of a failing (is_valid, message) check."""
        is_valid, message = check
        if not is_valid:
            raise error(message)
