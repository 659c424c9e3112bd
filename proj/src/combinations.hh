#pragma once

#include <cstddef>
#include <vector>

namespace cosetcsp::innards
{
    /// Calls f on every r-subset of {0..n-1}, as sorted index vectors in
    /// lexicographic order, until f returns false. Returns false if stopped.
    template <typename F_>
    auto for_each_combination(std::size_t n, std::size_t r, F_ && f) -> bool
    {
        if (r > n)
            return true;
        std::vector<std::size_t> c(r);
        for (std::size_t i = 0 ; i < r ; ++i)
            c[i] = i;
        while (true) {
            if (! f(static_cast<const std::vector<std::size_t> &>(c)))
                return false;
            std::size_t i = r;
            while (i > 0 && c[i - 1] == n - r + i - 1)
                --i;
            if (i == 0)
                return true;
            ++c[i - 1];
            for (std::size_t k = i ; k < r ; ++k)
                c[k] = c[k - 1] + 1;
        }
    }

    /// Elements of `from` picked by the positions in `positions`.
    inline auto pick(const std::vector<std::size_t> & from, const std::vector<std::size_t> & positions) -> std::vector<std::size_t>
    {
        std::vector<std::size_t> result;
        result.reserve(positions.size());
        for (auto p : positions)
            result.push_back(from[p]);
        return result;
    }
}
