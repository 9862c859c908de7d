def remove_duplicates(items):
    out = []
    i = 0
    n = len(items)
    while (i < n):
        x = items[i]
        if (out.count(x) == 0):
            out.append(x)
        i = i + 1
    return out
