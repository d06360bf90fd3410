def _matches(record, attributes):

    return all(
        hasattr(record, a) and (getattr(record, a) == attributes[a] or attributes[a] == "*")
        for a in attributes
    )


def select_by_attributes(records, **attributes):
    """Select records described by their attributes.

    Parameters
    ----------
    records : list
        List of records (e.g. HeuristicCallRecord or InstanceRunRecord).
    **attributes
        Keyword arguments specifying the required attributes and their values.
        Use '*' to select any record that has the attribute.

    Returns
    -------
    out : list
        Records with matching attributes.
    """

    return [record for record in records if _matches(record, attributes)]


def match_records(list_a, list_b, select_by=("instance_id", "seed"), check=True):
    """align two record lists (inner join)

    Parameters
    ----------
    list_a : list
        List of records.
    list_b : list
        List of records.
    select_by : tuple of str, default: ("instance_id", "seed")
        Attributes to align the lists on.
    check : bool, default: True
        If True checks that only one record is found in list_b.

    Returns
    -------
    out_a : list
        Aligned list of records.
    out_b : list
        Aligned list of records.
    """

    out_a = list()
    out_b = list()

    for record in list_a:

        attributes = {key: getattr(record, key) for key in select_by}

        match = select_by_attributes(list_b, **attributes)

        if check and len(match) > 1:
            raise ValueError(f"found {len(match)} records for {attributes}")

        if match:
            out_a.append(record)
            out_b += match

    return out_a, out_b
