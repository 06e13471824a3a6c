import re
def is_hex(token):
    return re.fullmatch('[0-9a-f]+', token) is not None
def count_words(text):
    return len(text.split())
def join_all(parts):
    out = ''
    for p in parts:
        out = out + p
    return out
