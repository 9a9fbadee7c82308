"""Old helpers kept for compatibility."""


def emit(message):
    prefix = "legacy:"
    print(prefix, message)
