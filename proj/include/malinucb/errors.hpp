#ifndef MALINUCB_ERRORS_HPP
#define MALINUCB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace malinucb
{

// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, topology or argument. The CLI maps it to exit code 1.
class ConfigError : public Error
{
public:
  using Error::Error;
};

// File could not be read or written. The CLI maps it to exit code 2.
class IoError : public Error
{
public:
  IoError(const std::string &path, const std::string &what)
    : Error(what + ": " + path), path_(path)
  {
  }

  const std::string &path() const { return path_; }

private:
  std::string path_;
};

}  // namespace malinucb

#endif  // MALINUCB_ERRORS_HPP
