class InvalidArgumentError(ValueError):
    pass


class UnsupportedError(RuntimeError):
    """Operation needs data that this build discarded (e.g. level strings)."""


class BundleFormatError(Exception):
    def __init__(self, message, section=None):
        if section is not None:
            message = f"section {section}: {message}"
        super().__init__(message)
        self.section = section
