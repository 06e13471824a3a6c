def banner(title):
    line = '=' * len(title)
    return title.upper() + '\n' + line
def initials(name):
    return ''.join(w[0] for w in name.split())
def clean(s):
    return s.replace('\t', ' ').strip()
