#include "idemfactor/field.hpp"

#include <cctype>

namespace idemfactor {

std::string format_rational(const Rational& x)
{
    const auto num = boost::multiprecision::numerator(x);
    const auto den = boost::multiprecision::denominator(x);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);

    auto valid_integer = [](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i == part.size())
            return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                return false;
        return true;
    };

    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den))
        throw Error(ErrorKind::InvalidInput, "not a rational number: '" + std::string(text) + "'");
    using boost::multiprecision::mpz_int;
    const mpz_int d(den[0] == '+' ? den.substr(1) : den);
    if (d == 0)
        throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
    return Rational(mpz_int(num[0] == '+' ? num.substr(1) : num), d);
}

}  // namespace idemfactor
