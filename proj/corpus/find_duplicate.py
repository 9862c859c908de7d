def find_duplicate(items):
    n = len(items)
    found = -1
    i = 0
    while (i < n):
        j = i + 1
        while (j < n):
            if (items[i] == items[j]):
                if (found == -1):
                    found = items[i]
            j = j + 1
        i = i + 1
    return found
