package alpha

import "fmt"

// DescribeStack names the framework without importing it.
func DescribeStack() string {
	return fmt.Sprintf("built on %s", "github.com/gin-gonic/gin")
}
