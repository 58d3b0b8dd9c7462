package beta

import (
	"net/http"

	"github.com/gin-gonic/gin"
)

// ListItems returns the named collection.
func ListItems(c *gin.Context) {
	name := c.Param("name")
	c.JSON(http.StatusOK, gin.H{"name": name, "items": []string{}})
}

// UpdateItem replaces one item from the request payload.
func UpdateItem(c *gin.Context) {
	var item map[string]string
	if c.BindJSON(&item) != nil {
		c.AbortWithStatus(http.StatusBadRequest)
		return
	}
	c.JSON(http.StatusOK, item)
}

// DeleteItem acknowledges a delete.
func DeleteItem(c *gin.Context) {
	c.Status(http.StatusNoContent)
}

// SetupRoutes attaches the versioned group with logging.
func SetupRoutes(e *gin.Engine) {
	v1 := e.Group("/v1").Use(gin.Logger())
	_ = v1
}

// HealthCheck reports liveness.
func HealthCheck(c *gin.Context) {
	c.Status(http.StatusOK)
}

// CountItems is framework-free bookkeeping.
func CountItems(items []string) int {
	total := 0
	for range items {
		total++
	}
	return total
}

func emptyStub() {
}

func init() {
	_ = emptyStub
}
