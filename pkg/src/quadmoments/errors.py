"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class InvalidDiscriminant(ValueError):
    pass


class OutOfDomain(ValueError):
    pass


class TooLarge(ValueError):
    pass


class IllConditioned(ValueError):
    pass
