"""Exception types shared across the package."""


class FlashVaultError(Exception):
    pass


class ConfigurationError(FlashVaultError, ValueError):
    pass


class InvalidPermutationError(FlashVaultError, ValueError):
    pass


class InvalidModulusError(FlashVaultError, ValueError):
    pass


class KeyLengthError(FlashVaultError, ValueError):
    pass


class UnsupportedAlgorithmError(FlashVaultError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class StateError(FlashVaultError, RuntimeError):
    pass


class OutOfSpaceError(FlashVaultError, RuntimeError):
    pass


class SizeMismatchError(FlashVaultError, ValueError):
    pass


class InvalidPointError(FlashVaultError, ValueError):
    pass


class InvalidRequestError(FlashVaultError, ValueError):
    """An I/O request or scenario violates its preconditions."""
