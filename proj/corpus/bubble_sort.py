def bubble_sort(items):
    arr = items.copy()
    n = len(arr)
    i = 0
    while (i < n):
        j = 0
        while (j < n - i - 1):
            if (arr[j] > arr[j + 1]):
                t = arr[j]
                arr[j] = arr[j + 1]
                arr[j + 1] = t
            j = j + 1
        i = i + 1
    return arr
